//! Dense-matrix reference simulator for amplitude estimation.
//!
//! Builds the textbook network on `C^m ⊗ C^S`: the preparation unitary `A`
//! (a Householder reflection sending `|0⟩` to the uniform superposition over
//! oracle inputs), the phase flip `W` on inputs whose image lies in the target
//! set, the Grover rotation `Q = −A S₀ A† W`, the controlled powers
//! `Σ_j |j⟩⟨j| ⊗ Q^j`, and the inverse Fourier transform on the register.
//! Cost is `O(S³ + m·S² + m²·S)`; use it only as a test oracle.

use nalgebra::{Complex, DMatrix, DVector};
use std::f64::consts::PI;

use crate::dist::OracleTable;
use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// Size limits for the dense simulator.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceCaps {
    pub max_s: u64,
    pub max_m: u64,
}

impl Default for ReferenceCaps {
    fn default() -> Self {
        Self {
            max_s: 256,
            max_m: 64,
        }
    }
}

/// Exact outcome distribution of phase estimation on the Grover rotation for
/// the marked set `target`, using `m` register states.
pub fn unitary_reference_pmf(
    o: &OracleTable,
    target: &[u32],
    m: u64,
    caps: ReferenceCaps,
) -> Result<Vec<f64>> {
    let s = o.s();
    if s > caps.max_s {
        return Err(Error::CapExceeded(format!("S = {s} exceeds {}", caps.max_s)));
    }
    if m == 0 || m > caps.max_m {
        return Err(Error::CapExceeded(format!("m = {m} outside [1, {}]", caps.max_m)));
    }
    let s = s as usize;
    let m = m as usize;

    let a = preparation(s);
    let mut s0 = DMatrix::<C64>::identity(s, s);
    s0[(0, 0)] = C64::new(-1.0, 0.0);
    let mut marked = target.to_vec();
    marked.sort_unstable();
    let w = DMatrix::<C64>::from_diagonal(&DVector::from_iterator(
        s,
        o.table().iter().map(|v| {
            if marked.binary_search(v).is_ok() {
                C64::new(-1.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        }),
    ));
    let q = -(&a * &s0 * a.adjoint() * &w);

    // Row j of `joint` holds Q^j A|0⟩ / √m.
    let mut joint = DMatrix::<C64>::zeros(m, s);
    let mut v: DVector<C64> = a.column(0).into_owned();
    let norm = 1.0 / (m as f64).sqrt();
    for j in 0..m {
        joint.set_row(j, &(v.transpose() * C64::new(norm, 0.0)));
        v = &q * v;
    }

    let inverse_qft = DMatrix::<C64>::from_fn(m, m, |y, j| {
        C64::from_polar(norm, -2.0 * PI * (y * j) as f64 / m as f64)
    });
    let out = inverse_qft * joint;
    Ok((0..m).map(|y| out.row(y).norm_squared()).collect())
}

/// Householder reflection exchanging `|0⟩` and the uniform superposition.
fn preparation(s: usize) -> DMatrix<C64> {
    let amp = 1.0 / (s as f64).sqrt();
    let mut v = DVector::<C64>::from_element(s, C64::new(-amp, 0.0));
    v[0] += C64::new(1.0, 0.0);
    let norm2 = v.norm_squared();
    let mut a = DMatrix::<C64>::identity(s, s);
    if norm2 > 1e-30 {
        a -= &v * v.adjoint() * C64::new(2.0 / norm2, 0.0);
    }
    a
}
