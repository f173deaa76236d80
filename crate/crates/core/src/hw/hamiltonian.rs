use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::equivalence::spectral_norm;
use super::params::HardwareParams;
use crate::gates;
use crate::statevector::C64;

const SCAN_POINTS: usize = 240;
const SWEEPS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IswapDiagnostic {
    /// Evolution time `3π/(2g)`.
    pub t_ns: f64,
    /// `‖exp(-iHt) - iSWAP‖` with no alignment.
    pub raw_distance: f64,
    /// Same after RZ frame rotations on both qubits before and after, plus a
    /// global phase.
    pub frame_distance: f64,
    /// Evolution time in `(0, 3π/(2g)]` minimizing the frame distance.
    pub t_star_ns: f64,
    pub t_star_distance: f64,
}

/// `ω/2 (Z₁ + Z₂) + g (X₁X₂ + Y₁Y₂)` in rad/s.
pub fn pair_hamiltonian(params: &HardwareParams) -> DMatrix<C64> {
    let z = gates::z().to_dense();
    let x = gates::x().to_dense();
    let y = gates::y().to_dense();
    let id = DMatrix::<C64>::identity(2, 2);
    let w = C64::new(params.omega / 2.0, 0.0);
    let g = C64::new(params.coupling, 0.0);
    (z.kronecker(&id) + id.kronecker(&z)) * w + (x.kronecker(&x) + y.kronecker(&y)) * g
}

/// `exp(-iHt)` for Hermitian `h` through its eigendecomposition.
pub fn evolve(h: &DMatrix<C64>, t_seconds: f64) -> DMatrix<C64> {
    let eig = h.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l * t_seconds)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

fn frame(a: f64, b: f64) -> [C64; 4] {
    let mut f = [C64::new(0.0, 0.0); 4];
    for (idx, slot) in f.iter_mut().enumerate() {
        let z1 = if idx & 2 == 0 { 1.0 } else { -1.0 };
        let z2 = if idx & 1 == 0 { 1.0 } else { -1.0 };
        *slot = C64::from_polar(1.0, -(a * z1 + b * z2) / 2.0);
    }
    f
}

fn framed(u: &DMatrix<C64>, angles: &[f64; 4]) -> DMatrix<C64> {
    let pre = frame(angles[0], angles[1]);
    let post = frame(angles[2], angles[3]);
    DMatrix::from_fn(4, 4, |j, k| post[j] * u[(j, k)] * pre[k])
}

/// Trace overlap `tr(T† F_post U F_pre)` split by the sign the frame
/// coordinate `axis` contributes: the overlap at angle `x` is
/// `p e^{-ix/2} + q e^{ix/2}`.
fn split_overlap(u: &DMatrix<C64>, target: &DMatrix<C64>, angles: &[f64; 4], axis: usize) -> (C64, C64) {
    let mut a = *angles;
    a[axis] = 0.0;
    let f = framed(u, &a);
    let bit = if axis % 2 == 0 { 2 } else { 1 };
    let (mut p, mut q) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for j in 0..4 {
        for k in 0..4 {
            let term = target[(j, k)].conj() * f[(j, k)];
            let idx = if axis < 2 { k } else { j };
            if idx & bit == 0 {
                p += term;
            } else {
                q += term;
            }
        }
    }
    (p, q)
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if f(a) < f(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    (lo + hi) / 2.0
}

/// Distance from `u` to iSWAP minimized over RZ frames on both qubits
/// (before and after) and a global phase. Frames come from exact coordinate
/// ascent on the trace overlap from several starts; the spectral-norm
/// distance is reported.
pub fn frame_distance(u: &DMatrix<C64>) -> f64 {
    let target = gates::iswap().to_dense();
    let mut best = f64::INFINITY;
    for start in 0..16 {
        let mut angles = [(start % 4) as f64 * FRAC_PI_2, 0.3, (start / 4) as f64 * FRAC_PI_2, -0.7];
        for _ in 0..SWEEPS {
            for axis in 0..4 {
                let (p, q) = split_overlap(u, &target, &angles, axis);
                if p.norm() > 1e-300 && q.norm() > 1e-300 {
                    angles[axis] = p.arg() - q.arg();
                }
            }
        }
        let f = framed(u, &angles);
        let tr: C64 = f.iter().zip(target.iter()).map(|(a, t)| t.conj() * a).sum();
        let phase = if tr.norm() > 1e-300 { tr / tr.norm() } else { C64::new(1.0, 0.0) };
        best = best.min(spectral_norm(&(f - &target * phase)));
    }
    best
}

/// Diagnostic only: compares the coupled evolution with the ideal iSWAP.
pub fn iswap_hamiltonian_check(params: &HardwareParams) -> IswapDiagnostic {
    let h = pair_hamiltonian(params);
    let target = gates::iswap().to_dense();
    let t_max = 3.0 * PI / (2.0 * params.coupling);
    let u = evolve(&h, t_max);
    let dist_at = |t: f64| frame_distance(&evolve(&h, t));

    let mut best_i = 1;
    let mut best_d = f64::INFINITY;
    for i in 1..=SCAN_POINTS {
        let d = dist_at(t_max * i as f64 / SCAN_POINTS as f64);
        if d < best_d - 1e-9 {
            best_i = i;
            best_d = d;
        }
    }
    let step = t_max / SCAN_POINTS as f64;
    let center = step * best_i as f64;
    let t_star = golden_max(|t| -dist_at(t), (center - step).max(step * 1e-3), (center + step).min(t_max));
    let refined = dist_at(t_star);
    let (t_star, t_star_distance) = if refined <= best_d { (t_star, refined) } else { (center, best_d) };

    IswapDiagnostic {
        t_ns: t_max * 1e9,
        raw_distance: spectral_norm(&(u.clone() - &target)),
        frame_distance: frame_distance(&u),
        t_star_ns: t_star * 1e9,
        t_star_distance,
    }
}
