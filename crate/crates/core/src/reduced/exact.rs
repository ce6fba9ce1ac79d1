//! Untruncated expected hitting time of the measured walk.
//!
//! With `N = Π₀U` (not-found evolution) and `Y` the target projector,
//! `p(t) = ‖YU N^{t-1} ψ₀‖²`, so
//!
//! ```text
//! τ = Σ_t t·p(t) = ⟨ψ₀|B|ψ₀⟩,   A − N†AN = (YU)†(YU),   B − N†BN = A.
//! ```
//!
//! Both Stein equations are solved on the Krylov space of `ψ₀` under `N`
//! (which is where the walk lives), after a complex Schur decomposition of
//! the restricted `N`. An eigenvalue of unit modulus whose eigenspace
//! overlaps `ψ₀` means part of the walker never decays: a dark state, for
//! which the sum diverges.

use nalgebra::{DMatrix, DVector, RealField, Schur};
use num_complex::Complex;
use num_traits::Float;

use super::walk::Evolution;
use crate::error::WalkError;
use crate::scalar::Real;

/// Squared overlap with the unit-modulus invariant subspace above which the
/// start state is considered to carry a dark component.
pub const DARK_OVERLAP: f64 = 1e-8;

/// Expected hitting time `Σ_t t·p(t)` summed to infinity.
pub fn expected_hitting_exact<R, E>(evolution: &E) -> Result<R, WalkError>
where
    R: Real + RealField,
    E: Evolution<R> + ?Sized,
{
    let krylov = arnoldi(evolution);
    let k = krylov.h.nrows();
    let (mut v, mut t) = schur(&krylov.h).ok_or(WalkError::DecompositionFailed)?;

    // Move unit-modulus eigenvalues to the front. For a contraction their
    // invariant subspace is reducing and invisible to the target, so a
    // negligible overlap with it (rounding leaking into the Krylov space)
    // can be dropped; a real overlap is a dark state.
    let margin = Float::max(R::lit(1e-9), R::lit(10.0) * <R as Float>::epsilon());
    let is_dark = |z: Complex<R>| z.norm() >= R::one() - margin;
    let mut r = 0;
    for i in 0..k {
        if is_dark(t[(i, i)]) {
            for j in (r..i).rev() {
                swap_schur(&mut t, &mut v, j);
            }
            r += 1;
        }
    }
    let mut e1 = DVector::zeros(k);
    e1[0] = Complex::new(krylov.beta, R::zero());
    let w = v.adjoint() * e1;
    let trapped = w.rows(0, r).norm_squared() / (krylov.beta * krylov.beta);
    if trapped > R::lit(DARK_OVERLAP) {
        return Err(WalkError::DarkStateDetected);
    }

    let m = k - r;
    let g = &krylov.z.adjoint() * &krylov.z;
    let g = (v.adjoint() * g * &v).view((r, r), (m, m)).into_owned();
    let t = t.view((r, r), (m, m)).into_owned();
    let w = w.rows(r, m).into_owned();
    let a = stein_upper(&t, &g);
    let b = stein_upper(&t, &a);
    let tau = (w.adjoint() * &b * &w)[(0, 0)];
    Ok(tau.re)
}

/// Swaps diagonal entries `j` and `j+1` of the Schur form `V T V†` with a
/// Givens rotation, keeping `T` upper triangular.
fn swap_schur<R: Real + RealField>(
    t: &mut DMatrix<Complex<R>>,
    v: &mut DMatrix<Complex<R>>,
    j: usize,
) {
    let (t11, t22, t12) = (t[(j, j)], t[(j + 1, j + 1)], t[(j, j + 1)]);
    let x = (t12, t22 - t11);
    let rho = Float::sqrt(x.0.norm_sqr() + x.1.norm_sqr());
    if rho == R::zero() {
        return;
    }
    let (c, s) = (x.0 / rho, x.1 / rho);
    // G = [[c, -conj(s)], [s, conj(c)]]; its first column spans the
    // eigenvector of the 2x2 block for t22
    let k = t.nrows();
    for row in 0..k {
        let (a, b) = (t[(row, j)], t[(row, j + 1)]);
        t[(row, j)] = a * c + b * s;
        t[(row, j + 1)] = -a * s.conj() + b * c.conj();
        let (a, b) = (v[(row, j)], v[(row, j + 1)]);
        v[(row, j)] = a * c + b * s;
        v[(row, j + 1)] = -a * s.conj() + b * c.conj();
    }
    for col in 0..k {
        let (a, b) = (t[(j, col)], t[(j + 1, col)]);
        t[(j, col)] = c.conj() * a + s.conj() * b;
        t[(j + 1, col)] = -s * a + c * b;
    }
    t[(j + 1, j)] = Complex::new(R::zero(), R::zero());
}

/// Complex Schur form `h = V T V†`.
///
/// QR iteration can cycle on the highly structured Hessenberg matrices the
/// walk produces; if it does, retry on a matrix rotated by a fixed
/// pseudo-random unitary.
fn schur<R: Real + RealField>(
    h: &DMatrix<Complex<R>>,
) -> Option<(DMatrix<Complex<R>>, DMatrix<Complex<R>>)> {
    let k = h.nrows();
    let max_iter = 1000 + 100 * k;
    if let Some(s) = Schur::try_new(h.clone(), R::default_epsilon(), max_iter) {
        return Some(s.unpack());
    }
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        R::lit((seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
    };
    let g = DMatrix::from_fn(k, k, |_, _| Complex::new(next(), next()));
    let q = g.qr().q();
    let rotated = q.adjoint() * h * &q;
    let (w, t) = Schur::try_new(rotated, R::default_epsilon(), max_iter)?.unpack();
    Some((q * w, t))
}

struct Krylov<R: Real + RealField> {
    /// Restriction of `N` to the Krylov space (square).
    h: DMatrix<Complex<R>>,
    /// `Y U Q`: target components of `U` applied to the basis vectors.
    z: DMatrix<Complex<R>>,
    beta: R,
}

fn arnoldi<R, E>(evolution: &E) -> Krylov<R>
where
    R: Real + RealField,
    E: Evolution<R> + ?Sized,
{
    let n = evolution.dimension();
    let zero = Complex::new(R::zero(), R::zero());
    let target: Vec<bool> = (0..n).map(|i| evolution.is_target(i)).collect();
    let breakdown = Float::powf(<R as Float>::epsilon(), R::lit(0.7));

    let mut q0 = evolution.initial_state();
    let beta = norm(&q0);
    for a in &mut q0 {
        *a /= beta;
    }
    let mut basis = vec![q0];
    let mut h_cols: Vec<Vec<Complex<R>>> = Vec::new();
    let mut z_cols: Vec<Vec<Complex<R>>> = Vec::new();
    let mut u = vec![zero; n];
    loop {
        let j = basis.len() - 1;
        evolution.apply(&basis[j], &mut u);
        let mut z = vec![zero; n];
        for i in 0..n {
            if target[i] {
                z[i] = u[i];
                u[i] = zero;
            }
        }
        z_cols.push(z);
        let mut h = vec![zero; j + 2];
        // two Gram-Schmidt passes keep the basis orthonormal to rounding
        for _ in 0..2 {
            for (i, qi) in basis.iter().enumerate() {
                let c = dot(qi, &u);
                h[i] += c;
                for (x, y) in u.iter_mut().zip(qi) {
                    *x -= *y * c;
                }
            }
        }
        let r = norm(&u);
        if r <= breakdown || basis.len() == n {
            h.truncate(j + 1);
            h_cols.push(h);
            break;
        }
        h[j + 1] = Complex::new(r, R::zero());
        h_cols.push(h);
        basis.push(u.iter().map(|&x| x / r).collect());
    }

    let k = basis.len();
    let h = DMatrix::from_fn(k, k, |i, j| h_cols[j].get(i).copied().unwrap_or(zero));
    let z = DMatrix::from_fn(n, k, |i, j| z_cols[j][i]);
    Krylov { h, z, beta }
}

fn dot<R: Real>(a: &[Complex<R>], b: &[Complex<R>]) -> Complex<R> {
    a.iter()
        .zip(b)
        .fold(Complex::new(R::zero(), R::zero()), |acc, (x, y)| acc + x.conj() * y)
}

fn norm<R: Real>(a: &[Complex<R>]) -> R {
    a.iter()
        .map(|x| x.norm_sqr())
        .fold(R::zero(), |s, v| s + v)
        .sqrt()
}

/// Solves `X − T†XT = C` for upper-triangular `T`, column by column.
fn stein_upper<R: Real + RealField>(
    t: &DMatrix<Complex<R>>,
    c: &DMatrix<Complex<R>>,
) -> DMatrix<Complex<R>> {
    let k = t.nrows();
    let zero = Complex::new(R::zero(), R::zero());
    let one = Complex::new(R::one(), R::zero());
    let mut x = DMatrix::from_element(k, k, zero);
    for j in 0..k {
        let mut v = vec![zero; k];
        for l in 0..j {
            let tlj = t[(l, j)];
            if tlj != zero {
                for r in 0..k {
                    v[r] += x[(r, l)] * tlj;
                }
            }
        }
        let tjj = t[(j, j)];
        for i in 0..k {
            let mut known = zero;
            let mut same_col = zero;
            for r in 0..=i {
                let tri = t[(r, i)].conj();
                known += tri * v[r];
                if r < i {
                    same_col += tri * x[(r, j)];
                }
            }
            let rhs = c[(i, j)] + known + tjj * same_col;
            x[(i, j)] = rhs / (one - tjj * t[(i, i)].conj());
        }
    }
    x
}
