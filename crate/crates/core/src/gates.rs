//! Gate matrices.
//!
//! Dense matrices are row-major over the local index of their targets, with
//! the first target as the most significant local bit.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::statevector::C64;

#[derive(Clone, Debug, PartialEq)]
pub enum GateMatrix {
    Dense { arity: usize, matrix: Vec<C64> },
    /// `I - 2|1…1⟩⟨1…1|` on `arity` qubits.
    PhaseFlip { arity: usize },
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

const O: C64 = C64::new(0.0, 0.0);
const I1: C64 = C64::new(1.0, 0.0);

impl GateMatrix {
    pub fn dense(arity: usize, matrix: Vec<C64>) -> Result<Self> {
        if arity == 0 || matrix.len() != 1 << (2 * arity) {
            return Err(Error::arg(format!(
                "{} entries do not form a {arity}-qubit matrix",
                matrix.len()
            )));
        }
        Ok(GateMatrix::Dense { arity, matrix })
    }

    pub fn arity(&self) -> usize {
        match self {
            GateMatrix::Dense { arity, .. } | GateMatrix::PhaseFlip { arity } => *arity,
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = 1usize << self.arity();
        match self {
            GateMatrix::Dense { matrix, .. } => DMatrix::from_row_slice(dim, dim, matrix),
            GateMatrix::PhaseFlip { .. } => {
                let mut m = DMatrix::identity(dim, dim);
                m[(dim - 1, dim - 1)] = -I1;
                m
            }
        }
    }

    pub fn adjoint(&self) -> GateMatrix {
        match self {
            GateMatrix::PhaseFlip { arity } => GateMatrix::PhaseFlip { arity: *arity },
            GateMatrix::Dense { arity, matrix } => {
                let dim = 1usize << arity;
                let mut out = vec![O; dim * dim];
                for r in 0..dim {
                    for col in 0..dim {
                        out[col * dim + r] = matrix[r * dim + col].conj();
                    }
                }
                GateMatrix::Dense {
                    arity: *arity,
                    matrix: out,
                }
            }
        }
    }

    /// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ self`, control as the new leading qubit.
    pub fn controlled(&self) -> GateMatrix {
        match self {
            GateMatrix::PhaseFlip { arity } => GateMatrix::PhaseFlip { arity: arity + 1 },
            GateMatrix::Dense { arity, matrix } => {
                let dim = 1usize << arity;
                let big = 2 * dim;
                let mut out = vec![O; big * big];
                for i in 0..dim {
                    out[i * big + i] = I1;
                }
                for r in 0..dim {
                    for col in 0..dim {
                        out[(dim + r) * big + dim + col] = matrix[r * dim + col];
                    }
                }
                GateMatrix::Dense {
                    arity: arity + 1,
                    matrix: out,
                }
            }
        }
    }

    /// Largest entry of `|U U† - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let m = self.to_dense();
        let prod = &m * m.adjoint();
        let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
        (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn one(m: [C64; 4]) -> GateMatrix {
    GateMatrix::Dense {
        arity: 1,
        matrix: m.to_vec(),
    }
}

pub fn x() -> GateMatrix {
    one([O, I1, I1, O])
}

pub fn y() -> GateMatrix {
    one([O, c(0.0, -1.0), c(0.0, 1.0), O])
}

pub fn z() -> GateMatrix {
    one([I1, O, O, -I1])
}

pub fn h() -> GateMatrix {
    let s = c(FRAC_1_SQRT_2, 0.0);
    one([s, s, s, -s])
}

/// `diag(1, e^{iφ})`.
pub fn phase(phi: f64) -> GateMatrix {
    one([I1, O, O, C64::from_polar(1.0, phi)])
}

/// `exp(-iθX/2)`.
pub fn rx(theta: f64) -> GateMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    one([c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])
}

/// `exp(-iθY/2)`.
pub fn ry(theta: f64) -> GateMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    one([c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

/// `exp(-iθZ/2)`.
pub fn rz(theta: f64) -> GateMatrix {
    one([C64::from_polar(1.0, -theta / 2.0), O, O, C64::from_polar(1.0, theta / 2.0)])
}

/// `diag(1, i)`.
pub fn gate_a() -> GateMatrix {
    one([I1, O, O, c(0.0, 1.0)])
}

/// Real rotation by π/8; equals `RY(π/4)`.
pub fn gate_b() -> GateMatrix {
    let (s, co) = FRAC_PI_8.sin_cos();
    one([c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

/// `A · B · Z`.
pub fn gate_c() -> GateMatrix {
    let (s, co) = FRAC_PI_8.sin_cos();
    one([c(co, 0.0), c(s, 0.0), c(0.0, s), c(0.0, -co)])
}

/// `diag(1, e^{-iπ/4})`.
pub fn gate_d() -> GateMatrix {
    phase(-FRAC_PI_4)
}

pub fn cnot() -> GateMatrix {
    x().controlled()
}

pub fn cz() -> GateMatrix {
    z().controlled()
}

pub fn ch() -> GateMatrix {
    h().controlled()
}

pub fn ccx() -> GateMatrix {
    cnot().controlled()
}

pub fn ccz() -> GateMatrix {
    GateMatrix::PhaseFlip { arity: 3 }
}

pub fn swap() -> GateMatrix {
    GateMatrix::Dense {
        arity: 2,
        matrix: vec![
            I1, O, O, O, //
            O, O, I1, O, //
            O, I1, O, O, //
            O, O, O, I1,
        ],
    }
}

pub fn iswap() -> GateMatrix {
    let i = c(0.0, 1.0);
    GateMatrix::Dense {
        arity: 2,
        matrix: vec![
            I1, O, O, O, //
            O, O, i, O, //
            O, i, O, O, //
            O, O, O, I1,
        ],
    }
}

/// `I - 2|1…1⟩⟨1…1|` on `n` qubits.
pub fn s1(n: usize) -> Result<GateMatrix> {
    if n == 0 {
        return Err(Error::arg("S1 needs at least one qubit"));
    }
    Ok(GateMatrix::PhaseFlip { arity: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn phase_distance(u: &DMatrix<C64>, v: &DMatrix<C64>) -> f64 {
        let tr: C64 = (v.adjoint() * u).trace();
        let ph = if tr.norm() > 0.0 { tr / tr.norm() } else { I1 };
        (u - v * ph).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn all_unitary() {
        let gates = [
            x(), y(), z(), h(), rx(0.3), ry(-1.1), rz(2.0), gate_a(), gate_b(), gate_c(),
            gate_d(), cnot(), cz(), ch(), ccx(), ccz(), swap(), iswap(), s1(4).unwrap(),
        ];
        for g in &gates {
            assert!(g.unitarity_error() < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn rotation_identities() {
        let prod = |ms: &[GateMatrix]| {
            ms.iter()
                .map(|m| m.to_dense())
                .reduce(|a, b| a * b)
                .unwrap()
        };
        let s = (4.0 - 2.0 * 2f64.sqrt()).sqrt();
        let b_lit = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0 / s, 0.0), c((1.0 - 2f64.sqrt()) / s, 0.0), c((2f64.sqrt() - 1.0) / s, 0.0), c(1.0 / s, 0.0)],
        );
        assert!(phase_distance(&gate_b().to_dense(), &b_lit) < 1e-12);
        assert!(phase_distance(&gate_b().to_dense(), &ry(FRAC_PI_4).to_dense()) < 1e-12);
        assert!(phase_distance(&gate_a().to_dense(), &rz(FRAC_PI_2).to_dense()) < 1e-12);
        assert!(phase_distance(&gate_d().to_dense(), &rz(-FRAC_PI_4).to_dense()) < 1e-12);
        assert!(
            phase_distance(
                &gate_b().to_dense(),
                &prod(&[rz(FRAC_PI_2), rx(FRAC_PI_4), rz(-FRAC_PI_2)])
            ) < 1e-12
        );
        assert!(
            phase_distance(
                &gate_c().to_dense(),
                &prod(&[rz(PI), rx(FRAC_PI_4), rz(FRAC_PI_2)])
            ) < 1e-12
        );
        assert!(
            phase_distance(&gate_c().to_dense(), &prod(&[gate_a(), gate_b(), z()])) < 1e-12
        );
        assert!(
            phase_distance(&h().to_dense(), &prod(&[rz(FRAC_PI_2), rx(FRAC_PI_2), rz(FRAC_PI_2)]))
                < 1e-12
        );
        for theta in [0.3, -1.2, 2.9] {
            assert!(
                phase_distance(
                    &ry(theta).to_dense(),
                    &prod(&[rz(-FRAC_PI_2), rx(-theta), rz(FRAC_PI_2)])
                ) < 1e-12
            );
        }
    }

    #[test]
    fn controlled_layout() {
        let m = cnot().to_dense();
        assert_eq!(m[(3, 2)], I1);
        assert_eq!(m[(2, 3)], I1);
        assert_eq!(m[(0, 0)], I1);
        assert_eq!(cz().to_dense()[(3, 3)], -I1);
        assert_eq!(ccz().controlled(), s1(4).unwrap());
    }

    #[test]
    fn adjoint_inverts() {
        let g = rx(0.7).controlled();
        let m = g.to_dense() * g.adjoint().to_dense();
        assert!((m - DMatrix::identity(4, 4)).iter().all(|z| z.norm() < 1e-14));
    }
}
