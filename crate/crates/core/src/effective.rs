//! Hamiltonians restricted to a chain basis.
//!
//! The effective space is the product of a small factor (Fock levels of the
//! mode, or the two electron spin states) with the chain states. The total
//! excitation number is conserved, so the matrix is assembled directly as a
//! list of independent blocks.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chain::{EffectiveBasis, Model};
use crate::error::{invalid, Result};
use crate::linalg::{CMatrix, CVector, SpectralPropagator};

/// Electron spin index of `|↑⟩`; states are written `u|↑⟩ + v|↓⟩`.
pub const SPIN_UP: usize = 0;
pub const SPIN_DOWN: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    /// Fock states `0..field_dim`; only products with `n + col < field_dim`
    /// are kept, which are exactly those reachable from a field inside the
    /// cutoff.
    Field { field_dim: usize },
    ElectronSpin,
}

/// One effective basis state: factor index (`n`, or [`SPIN_UP`]/[`SPIN_DOWN`])
/// times chain state `chain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductLabel {
    pub factor: usize,
    pub chain: usize,
}

#[derive(Debug, Clone)]
pub struct Block {
    pub excitation: usize,
    /// Indices into [`EffectiveHamiltonian::labels`].
    pub members: Vec<usize>,
    pub matrix: CMatrix,
}

#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    factor: Factor,
    labels: Vec<ProductLabel>,
    blocks: Vec<Block>,
    // (block, position inside block) for every label
    place: Vec<(usize, usize)>,
}

fn excitation(factor: Factor, f: usize, col: usize) -> usize {
    match factor {
        Factor::Field { .. } => f + col,
        Factor::ElectronSpin => col + usize::from(f == SPIN_UP),
    }
}

pub fn assemble_effective_hamiltonian(basis: &EffectiveBasis, factor: Factor) -> Result<EffectiveHamiltonian> {
    let chain = basis.labels();
    let labels: Vec<ProductLabel> = match (basis.model(), factor) {
        (Model::Itc, Factor::Field { field_dim }) => {
            if field_dim == 0 {
                return invalid("field_dim must be at least 1");
            }
            let mut out = Vec::new();
            for n in 0..field_dim {
                for (k, l) in chain.iter().enumerate() {
                    if n + l.col < field_dim {
                        out.push(ProductLabel { factor: n, chain: k });
                    }
                }
            }
            out
        }
        (Model::CentralSpin, Factor::ElectronSpin) => (0..2)
            .flat_map(|s| (0..chain.len()).map(move |k| ProductLabel { factor: s, chain: k }))
            .collect(),
        (model, factor) => return invalid(format!("{model:?} basis cannot carry a {factor:?} factor")),
    };

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        groups.entry(excitation(factor, l.factor, chain[l.chain].col)).or_default().push(i);
    }
    let mut place = vec![(0, 0); labels.len()];
    let mut blocks = Vec::with_capacity(groups.len());
    for (b, (k, members)) in groups.into_iter().enumerate() {
        for (p, &i) in members.iter().enumerate() {
            place[i] = (b, p);
        }
        let d = members.len();
        blocks.push(Block { excitation: k, members, matrix: CMatrix::zeros(d, d) });
    }

    let j = basis.couplings();
    let lookup: BTreeMap<ProductLabel, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut set = |a: usize, bi: usize, z: C64| {
        let (ba, pa) = place[a];
        let (bb, pb) = place[bi];
        debug_assert_eq!(ba, bb);
        blocks[ba].matrix[(pa, pb)] += z;
        if pa != pb {
            blocks[ba].matrix[(pb, pa)] += z.conj();
        }
    };
    match factor {
        Factor::Field { .. } => {
            // a J⁺: |n, v⟩ → √n |n−1, J⁺v⟩
            for (i, l) in labels.iter().enumerate() {
                if l.factor == 0 {
                    continue;
                }
                let sq = (l.factor as f64).sqrt();
                for (w, lw) in chain.iter().enumerate() {
                    if lw.col != chain[l.chain].col + 1 {
                        continue;
                    }
                    let z = j[(w, l.chain)];
                    if z == C64::new(0.0, 0.0) {
                        continue;
                    }
                    if let Some(&t) = lookup.get(&ProductLabel { factor: l.factor - 1, chain: w }) {
                        set(t, i, z * sq);
                    }
                }
            }
        }
        Factor::ElectronSpin => {
            let abar = basis.profile().mean();
            for (i, l) in labels.iter().enumerate() {
                let col = chain[l.chain].col as f64;
                let sz = if l.factor == SPIN_UP { 0.5 } else { -0.5 };
                set(i, i, C64::new(abar * sz * col, 0.0));
                if l.factor != SPIN_UP {
                    continue;
                }
                // ½ S⁻A⁺: |↑, v⟩ → ½ |↓, A⁺v⟩
                for (w, lw) in chain.iter().enumerate() {
                    if lw.col == chain[l.chain].col + 1 {
                        let t = lookup[&ProductLabel { factor: SPIN_DOWN, chain: w }];
                        set(t, i, j[(w, l.chain)] * 0.5);
                    }
                }
            }
        }
    }
    Ok(EffectiveHamiltonian { factor, labels, blocks, place })
}

impl EffectiveHamiltonian {
    pub fn factor(&self) -> Factor {
        self.factor
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[ProductLabel] {
        &self.labels
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn index_of(&self, factor: usize, chain: usize) -> Option<usize> {
        self.labels.iter().position(|l| l.factor == factor && l.chain == chain)
    }

    pub fn block_of(&self, index: usize) -> &Block {
        &self.blocks[self.place[index].0]
    }

    /// The full matrix with zeros between blocks.
    pub fn dense(&self) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim(), self.dim());
        for b in &self.blocks {
            for (p, &i) in b.members.iter().enumerate() {
                for (q, &j) in b.members.iter().enumerate() {
                    h[(i, j)] = b.matrix[(p, q)];
                }
            }
        }
        h
    }

    /// Prepares `e^{-iHt}ψ₀`; blocks that carry no amplitude are skipped.
    pub fn evolution(&self, psi0: &CVector) -> Result<BlockEvolution> {
        if psi0.len() != self.dim() {
            return invalid(format!("initial state has length {}, space has {}", psi0.len(), self.dim()));
        }
        let norm = psi0.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return invalid(format!("initial state norm {norm} is not 1"));
        }
        let mut parts = Vec::new();
        for b in &self.blocks {
            let local = CVector::from_iterator(b.members.len(), b.members.iter().map(|&i| psi0[i]));
            if local.iter().all(|z| *z == C64::new(0.0, 0.0)) {
                continue;
            }
            let prop = SpectralPropagator::new(&b.matrix)?;
            let coeffs = prop.project(&local);
            parts.push((b.members.clone(), prop, coeffs));
        }
        Ok(BlockEvolution { dim: self.dim(), parts })
    }
}

#[derive(Debug, Clone)]
pub struct BlockEvolution {
    dim: usize,
    parts: Vec<(Vec<usize>, SpectralPropagator, CVector)>,
}

impl BlockEvolution {
    pub fn state_at(&self, t: f64) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for (members, prop, coeffs) in &self.parts {
            let local = prop.evolve_projected(coeffs, t);
            for (p, &i) in members.iter().enumerate() {
                out[i] = local[p];
            }
        }
        out
    }
}
