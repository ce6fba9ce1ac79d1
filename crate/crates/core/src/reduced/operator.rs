//! Reduced shift∘coin operator.

use num_bigint::BigUint;
use num_complex::Complex;

use super::basis::{build_basis, initial_amplitudes, ReducedBasis};
use super::walk::Evolution;
use crate::error::WalkError;
use crate::scalar::Real;
use crate::topology::WalkTopology;

/// Tolerance for the assembly sanity check in [`WalkOperator::new`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// States sharing a position; the coin mixes within a block.
#[derive(Debug, Clone)]
struct Block<R> {
    states: Vec<usize>,
    sqrt_n: Vec<R>,
    /// `2 / Σ N_J`: `p` everywhere except at the target, where only the
    /// arrival directions are kept.
    scale: R,
}

/// `U = S·C` on a reduced basis, with the target projector and the uniform
/// start state.
///
/// The compressed coin acting on a block is
/// `c(J,K) = (2/p)·√(N(J)N(K)) − δ_JK`, applied in O(block) as a rank-one
/// update. `S` is a permutation of basis indices.
#[derive(Debug, Clone)]
pub struct WalkOperator<R> {
    basis: ReducedBasis,
    blocks: Vec<Block<R>>,
    partner: Vec<usize>,
    target: Vec<bool>,
    initial: Vec<Complex<R>>,
}

impl<R: Real> WalkOperator<R> {
    /// Builds the basis and operator for `topology` (loop padding implied).
    pub fn for_topology(topology: &WalkTopology) -> Result<Self, WalkError> {
        Self::new(build_basis(topology))
    }

    pub fn new(basis: ReducedBasis) -> Result<Self, WalkError> {
        let n = basis.len();
        let mut blocks: Vec<Block<R>> = Vec::new();
        let mut block_of_pos = std::collections::HashMap::new();
        for (i, state) in basis.states().iter().enumerate() {
            let b = *block_of_pos
                .entry(state.position.clone())
                .or_insert_with(|| {
                    blocks.push(Block {
                        states: Vec::new(),
                        sqrt_n: Vec::new(),
                        scale: R::zero(),
                    });
                    blocks.len() - 1
                });
            let count = basis
                .weights()
                .direction_count(&state.position, state.direction);
            blocks[b].states.push(i);
            blocks[b].sqrt_n.push(R::lit(count as f64).sqrt());
        }
        for block in &mut blocks {
            let total: R = block.sqrt_n.iter().map(|&s| s * s).fold(R::zero(), |a, b| a + b);
            block.scale = R::lit(2.0) / total;
        }

        let mut partner = vec![usize::MAX; n];
        for (i, state) in basis.states().iter().enumerate() {
            let p = basis.shift_partner(state);
            partner[i] = basis.index_of(&p).ok_or_else(|| {
                WalkError::InvalidParameter(format!("shift leaves the basis at {state:?}"))
            })?;
        }

        let target = basis
            .states()
            .iter()
            .map(|s| &s.position == basis.target())
            .collect();
        let mut initial = vec![Complex::new(R::zero(), R::zero()); n];
        for (i, a) in initial_amplitudes(&basis) {
            initial[i] = Complex::new(R::lit(a), R::zero());
        }

        let op = Self {
            basis,
            blocks,
            partner,
            target,
            initial,
        };
        let deviation = op.unitarity_deviation();
        if !(deviation <= UNITARITY_TOLERANCE) {
            return Err(WalkError::NonUnitary { deviation });
        }
        Ok(op)
    }

    pub fn basis(&self) -> &ReducedBasis {
        &self.basis
    }

    /// Largest violation of the unitarity conditions: the shift must be a
    /// permutation, and each compressed coin `(2/P)|w⟩⟨w| − I` needs
    /// `⟨w|w⟩ = P/2 · 2/P = 1` for its reflection vector.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut seen = vec![false; self.partner.len()];
        for &j in &self.partner {
            if j >= seen.len() || seen[j] {
                return f64::INFINITY;
            }
            seen[j] = true;
        }
        let mut worst = 0.0f64;
        for block in &self.blocks {
            let norm: R = block
                .sqrt_n
                .iter()
                .map(|&s| s * s)
                .fold(R::zero(), |a, b| a + b);
            let dev = (norm * block.scale / R::lit(2.0) - R::one()).abs();
            worst = worst.max(dev.to_f64().unwrap_or(f64::INFINITY));
        }
        worst
    }

    /// Applies the coin only.
    pub fn apply_coin(&self, psi: &[Complex<R>], out: &mut [Complex<R>]) {
        for block in &self.blocks {
            let mut s = Complex::new(R::zero(), R::zero());
            for (&i, &w) in block.states.iter().zip(&block.sqrt_n) {
                s = s + psi[i] * w;
            }
            s = s * block.scale;
            for (&i, &w) in block.states.iter().zip(&block.sqrt_n) {
                out[i] = s * w - psi[i];
            }
        }
    }

    /// Index the shift sends basis state `i` to.
    pub fn shift_target(&self, i: usize) -> usize {
        self.partner[i]
    }

    /// Dense matrix of `U` (column `k` is `U e_k`); intended for small bases.
    pub fn to_dense(&self) -> Vec<Vec<Complex<R>>> {
        let n = self.dimension();
        let zero = Complex::new(R::zero(), R::zero());
        let mut cols = Vec::with_capacity(n);
        let mut e = vec![zero; n];
        for k in 0..n {
            e[k] = Complex::new(R::one(), R::zero());
            let mut col = vec![zero; n];
            self.apply(&e, &mut col);
            cols.push(col);
            e[k] = zero;
        }
        cols
    }

    /// Σ Ñ·N over the basis.
    pub fn covered_dimension(&self) -> BigUint {
        self.basis.covered_dimension()
    }
}

impl<R: Real> Evolution<R> for WalkOperator<R> {
    fn dimension(&self) -> usize {
        self.partner.len()
    }

    fn initial_state(&self) -> Vec<Complex<R>> {
        self.initial.clone()
    }

    fn apply(&self, psi: &[Complex<R>], out: &mut [Complex<R>]) {
        for block in &self.blocks {
            let mut s = Complex::new(R::zero(), R::zero());
            for (&i, &w) in block.states.iter().zip(&block.sqrt_n) {
                s = s + psi[i] * w;
            }
            s = s * block.scale;
            for (&i, &w) in block.states.iter().zip(&block.sqrt_n) {
                out[self.partner[i]] = s * w - psi[i];
            }
        }
    }

    fn is_target(&self, i: usize) -> bool {
        self.target[i]
    }
}
