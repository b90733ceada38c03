//! Time evolution `ψ(t) = e^{-iHt} ψ₀`.
//!
//! The Hamiltonian is split into the connected components of its sparsity
//! graph, which for the models here are the conserved-excitation blocks (or
//! finer). Small components are diagonalized; large ones are stepped with a
//! Chebyshev expansion whose coefficients are Bessel functions.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{CVector, SpectralPropagator};
use crate::sparse::CsrMatrix;

/// Components up to this size are propagated through a dense eigensolve.
pub const DENSE_BLOCK_LIMIT: usize = 600;
/// Propagation stops when the norm moves by more than this.
pub const NORM_DRIFT_ABORT: f64 = 1e-8;
/// Chebyshev terms are dropped once the Bessel weights fall below this.
const CHEB_TAIL: f64 = 1e-16;
/// Largest `half_width · dt` in one Chebyshev step.
const CHEB_MAX_ARG: f64 = 40.0;

/// `J_0(x) … J_kmax(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    let ax = x.abs();
    if ax < 1e-300 {
        out[0] = 1.0;
        return out;
    }
    // start well above both kmax and the turning point k ≈ x
    let mut m = kmax.max(ax as usize) + 30 + (ax.sqrt() * 4.0) as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut next = 0.0; // f_{k+1}
    let mut cur = 1e-300; // f_k
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        if k <= kmax {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = cur;
    norm += cur;
    for (k, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && k % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// Chebyshev propagator over one sparse component.
#[derive(Debug, Clone)]
struct Chebyshev {
    h: CsrMatrix,
    center: f64,
    half_width: f64,
}

impl Chebyshev {
    fn new(h: CsrMatrix) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for r in 0..h.dim() {
            let mut diag = 0.0;
            let mut off = 0.0;
            for (c, v) in h.row(r) {
                if c == r {
                    diag = v.re;
                } else {
                    off += v.norm();
                }
            }
            lo = lo.min(diag - off);
            hi = hi.max(diag + off);
        }
        let center = 0.5 * (lo + hi);
        let half_width = (0.5 * (hi - lo)).max(1e-12) * 1.01;
        Self { h, center, half_width }
    }

    /// `(H − c)/w · x`
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.h.mul_vec_into(x, y);
        let inv = 1.0 / self.half_width;
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = (*yi - xi * self.center) * inv;
        }
    }

    fn step(&self, psi: &[C64], dt: f64) -> Vec<C64> {
        let x = self.half_width * dt;
        let kmax = (1.5 * x.abs()) as usize + 40;
        let j = bessel_j_sequence(x, kmax);
        let n = psi.len();
        let mut acc: Vec<C64> = psi.iter().map(|v| v * j[0]).collect();
        let mut prev = psi.to_vec();
        let mut cur = vec![C64::new(0.0, 0.0); n];
        self.apply(&prev, &mut cur);
        let mut phase = C64::new(0.0, -1.0); // (−i)^k
        let mut k = 1;
        let mut scratch = vec![C64::new(0.0, 0.0); n];
        loop {
            let coef = phase * (2.0 * j[k]);
            for (a, v) in acc.iter_mut().zip(&cur) {
                *a += v * coef;
            }
            if k >= kmax || (k as f64 > x.abs() && j[k].abs() < CHEB_TAIL && j[k - 1].abs() < CHEB_TAIL) {
                break;
            }
            self.apply(&cur, &mut scratch);
            for (s, p) in scratch.iter_mut().zip(&prev) {
                *s = *s * 2.0 - p;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut scratch);
            phase *= C64::new(0.0, -1.0);
            k += 1;
        }
        let global = C64::from_polar(1.0, -self.center * dt);
        acc.iter_mut().for_each(|a| *a *= global);
        acc
    }

    fn evolve(&self, psi: &[C64], dt: f64) -> Vec<C64> {
        let steps = ((self.half_width * dt.abs()) / CHEB_MAX_ARG).ceil().max(1.0) as usize;
        let h = dt / steps as f64;
        let mut out = psi.to_vec();
        for _ in 0..steps {
            out = self.step(&out, h);
        }
        out
    }
}

enum Engine {
    Dense { prop: SpectralPropagator, coeffs: CVector },
    Chebyshev { cheb: Chebyshev, state: Vec<C64>, time: f64 },
}

/// Connected components of the sparsity graph, each sorted, in order of their
/// smallest index.
pub fn connected_components(h: &CsrMatrix) -> Vec<Vec<usize>> {
    let n = h.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for r in 0..n {
        for (c, _) in h.row(r) {
            let (a, b) = (find(&mut parent, r), find(&mut parent, c));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut root_to_block = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_to_block[r] == usize::MAX {
            root_to_block[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_to_block[r]].push(i);
    }
    blocks
}

/// Evolution of one initial state under a fixed sparse Hamiltonian.
pub struct Propagator {
    dim: usize,
    initial_norm: f64,
    parts: Vec<(Vec<usize>, Engine)>,
}

impl Propagator {
    pub fn new(h: &CsrMatrix, psi0: &CVector) -> Result<Self> {
        if psi0.len() != h.dim() {
            return invalid(format!("state of length {} for a {}-dim Hamiltonian", psi0.len(), h.dim()));
        }
        let scale = h.gershgorin_radius().max(1.0);
        let defect = h.hermitian_defect();
        if defect > 1e-10 * scale {
            return invalid(format!("Hamiltonian is not Hermitian (defect {defect:.3e})"));
        }
        let mut parts = Vec::new();
        for block in connected_components(h) {
            if block.iter().all(|&i| psi0[i] == C64::new(0.0, 0.0)) {
                continue;
            }
            let local: Vec<C64> = block.iter().map(|&i| psi0[i]).collect();
            let sub = h.submatrix(&block);
            let engine = if block.len() <= DENSE_BLOCK_LIMIT {
                let prop = SpectralPropagator::new(&sub.to_dense())?;
                let coeffs = prop.project(&CVector::from_vec(local));
                Engine::Dense { prop, coeffs }
            } else {
                Engine::Chebyshev { cheb: Chebyshev::new(sub), state: local, time: 0.0 }
            };
            parts.push((block, engine));
        }
        Ok(Self { dim: h.dim(), initial_norm: psi0.norm(), parts })
    }

    /// State at time `t`. Chebyshev components step from the last requested
    /// time, so ascending requests are cheapest.
    pub fn state_at(&mut self, t: f64) -> Result<CVector> {
        let mut out = CVector::zeros(self.dim);
        for (block, engine) in &mut self.parts {
            let local: Vec<C64> = match engine {
                Engine::Dense { prop, coeffs } => prop.evolve_projected(coeffs, t).iter().copied().collect(),
                Engine::Chebyshev { cheb, state, time } => {
                    if t != *time {
                        *state = cheb.evolve(state, t - *time);
                        *time = t;
                    }
                    state.clone()
                }
            };
            for (&i, v) in block.iter().zip(local) {
                out[i] = v;
            }
        }
        let drift = (out.norm() - self.initial_norm).abs();
        if !(drift <= NORM_DRIFT_ABORT) {
            return Err(Error::NumericalAbort(format!("norm drift {drift:.3e} at t = {t}")));
        }
        Ok(out)
    }
}

/// `e^{-iHt}ψ₀` at each requested time.
pub fn propagate(h: &CsrMatrix, psi0: &CVector, times: &[f64]) -> Result<Vec<CVector>> {
    let norm = psi0.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return invalid(format!("initial state norm {norm} is not 1"));
    }
    let mut p = Propagator::new(h, psi0)?;
    times.iter().map(|&t| p.state_at(t)).collect()
}
