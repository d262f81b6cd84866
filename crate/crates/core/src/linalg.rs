//! Small dense complex matrix helpers for the 9-dimensional spin space.

use nalgebra::{Matrix2, Matrix3, SMatrix};
use num_complex::Complex64 as C64;
use std::f64::consts::TAU;

/// 9×9 complex matrix on the electron ⊗ nuclear product space.
pub type Mat9 = SMatrix<C64, 9, 9>;
/// 3×3 complex matrix (single spin-1 factor, or nuclear reduced state).
pub type Mat3 = Matrix3<C64>;
/// 2×2 complex matrix (isolated two-level subspace).
pub type Mat2 = Matrix2<C64>;

pub const C_ZERO: C64 = C64::new(0.0, 0.0);
pub const C_ONE: C64 = C64::new(1.0, 0.0);
pub const C_I: C64 = C64::new(0.0, 1.0);

/// Kronecker product of two 3×3 matrices in the fixed |m_s⟩⊗|m_I⟩ ordering.
pub fn kron3(a: &Mat3, b: &Mat3) -> Mat9 {
    let mut out = Mat9::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[(3 * i + k, 3 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Flat basis index for electronic index `bs` and nuclear index `bn`,
/// each 0,1,2 for projections +1, 0, −1.
#[inline]
pub fn idx(bs: usize, bn: usize) -> usize {
    3 * bs + bn
}

/// Max |m - m†| entry.
pub fn hermiticity_defect(m: &Mat9) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max |entry| of the commutator [a, b] - c.
pub fn commutator_defect(a: &Mat9, b: &Mat9, c: &Mat9) -> f64 {
    let d = a * b - b * a - c;
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Unitary step exp(−i·2π·h·dt) for Hermitian `h` (MHz) over `dt` (µs),
/// by scaling-and-squaring with a truncated Taylor series.
pub fn expm_unitary(h: &Mat9, dt: f64) -> Mat9 {
    let a = h.map(|z| z * C64::new(0.0, -TAU * dt));
    // infinity norm
    let norm: f64 = (0..9)
        .map(|i| (0..9).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 2f64.powi(s as i32);
    let a_s = a.map(|z| z / scale);
    let mut term = Mat9::identity();
    let mut sum = Mat9::identity();
    for k in 1..=16 {
        term = (term * a_s).map(|z| z / k as f64);
        sum += term;
    }
    let mut u = sum;
    for _ in 0..s {
        u = u * u;
    }
    u
}

/// Eigenvalues of a Hermitian matrix via the cyclic complex Jacobi method,
/// sorted ascending. Used for state validation and as an independent check
/// on the propagator.
pub fn hermitian_eigenvalues(h: &Mat9) -> [f64; 9] {
    let mut a = *h;
    for _sweep in 0..60 {
        let off: f64 = (0..9)
            .flat_map(|p| (0..9).filter(move |q| *q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..9 {
            for q in (p + 1)..9 {
                let apq = a[(p, q)];
                if apq.norm() < 1e-16 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: col_p' = c*col_p - s*conj(phase)... apply G with
                // G_pp = c, G_pq = s*phase, G_qp = -s*conj(phase), G_qq = c
                for r in 0..9 {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * c - arq * s * phase.conj();
                    a[(r, q)] = arp * s * phase + arq * c;
                }
                for rc in 0..9 {
                    let apr = a[(p, rc)];
                    let aqr = a[(q, rc)];
                    a[(p, rc)] = apr * c - aqr * s * phase;
                    a[(q, rc)] = apr * s * phase.conj() + aqr * c;
                }
            }
        }
    }
    let mut evals = [0.0; 9];
    for i in 0..9 {
        evals[i] = a[(i, i)].re;
    }
    evals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    evals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_identity() {
        let e = Mat3::identity();
        let k = kron3(&e, &e);
        assert!((k - Mat9::identity()).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let u = expm_unitary(&Mat9::zeros(), 1.0);
        assert!((u - Mat9::identity()).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn expm_diagonal_phases() {
        let mut h = Mat9::zeros();
        for i in 0..9 {
            h[(i, i)] = C64::new(i as f64 * 0.3 - 1.0, 0.0);
        }
        let dt = 0.17;
        let u = expm_unitary(&h, dt);
        for i in 0..9 {
            let expect = C64::from_polar(1.0, -TAU * (i as f64 * 0.3 - 1.0) * dt);
            assert!((u[(i, i)] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn expm_is_unitary() {
        let mut h = Mat9::zeros();
        for i in 0..9 {
            for j in 0..9 {
                let v = C64::new((i * 7 + j) as f64 * 0.11 - 2.0, (i as f64 - j as f64) * 0.07);
                h[(i, j)] = v;
            }
        }
        let h = (h + h.adjoint()).map(|z| z * 0.5);
        let u = expm_unitary(&h, 0.23);
        let d = u.adjoint() * u - Mat9::identity();
        assert!(d.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn jacobi_eigenvalues_match_diagonal() {
        let mut h = Mat9::zeros();
        for i in 0..9 {
            h[(i, i)] = C64::new(9.0 - i as f64, 0.0);
        }
        let ev = hermitian_eigenvalues(&h);
        for (i, e) in ev.iter().enumerate() {
            assert!((e - (i as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_preserves_trace_and_matches_expm_phase() {
        let mut h = Mat9::zeros();
        for i in 0..9 {
            for j in 0..9 {
                h[(i, j)] = C64::new((i + 2 * j) as f64 * 0.05, (i as f64 - j as f64) * 0.03);
            }
        }
        let h = (h + h.adjoint()).map(|z| z * 0.5);
        let tr: f64 = (0..9).map(|i| h[(i, i)].re).sum();
        let ev = hermitian_eigenvalues(&h);
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-10);
    }
}
