//! Uniform-grid sampling of cosine polynomials and bracketed refinement.

use std::cell::RefCell;
use std::rc::Rc;

use crate::exact::cos_pi;

/// `cos(πi/(n−1))` and `sin(πi/(n−1))` for `i ∈ [0, 2(n−1))`, so that any
/// integer frequency on an `n`-point uniform grid is a table lookup.
pub struct PiTable {
    steps: u64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PiTable {
    /// Table for a grid of `n ≥ 2` points.
    pub fn new(n: usize) -> Self {
        let steps = (n.max(2) - 1) as u64;
        let period = 2 * steps as usize;
        let mut cos = Vec::with_capacity(period);
        let mut sin = Vec::with_capacity(period);
        for i in 0..period {
            let z = i as f64 / steps as f64;
            cos.push(cos_pi(z));
            sin.push(crate::exact::sin_pi(z));
        }
        PiTable { steps, cos, sin }
    }

    /// Shared table for `n` points, rebuilt only when `n` changes on this thread.
    pub fn cached(n: usize) -> Rc<PiTable> {
        thread_local! {
            static CACHE: RefCell<Option<Rc<PiTable>>> = const { RefCell::new(None) };
        }
        CACHE.with(|cell| {
            let mut slot = cell.borrow_mut();
            match slot.as_ref() {
                Some(t) if t.points() == n.max(2) => Rc::clone(t),
                _ => {
                    let t = Rc::new(PiTable::new(n));
                    *slot = Some(Rc::clone(&t));
                    t
                }
            }
        })
    }

    pub fn points(&self) -> usize {
        self.steps as usize + 1
    }

    /// `cos(π·k·j/(n−1))`.
    #[inline]
    pub fn cos(&self, k: u64, j: u64) -> f64 {
        self.cos[self.slot(k, j)]
    }

    /// `sin(π·k·j/(n−1))`.
    #[inline]
    pub fn sin(&self, k: u64, j: u64) -> f64 {
        self.sin[self.slot(k, j)]
    }

    /// `out[j] += b·cos(π·k·j/(n−1))` (or `sin`) for every grid index `j`.
    pub fn accumulate(&self, k: u64, sine: bool, b: f64, out: &mut [f64]) {
        let period = 2 * self.steps;
        let step = k % period;
        let values = if sine { &self.sin } else { &self.cos };
        let mut slot = 0u64;
        for o in out.iter_mut() {
            *o += b * values[slot as usize];
            slot += step;
            if slot >= period {
                slot -= period;
            }
        }
    }

    #[inline]
    fn slot(&self, k: u64, j: u64) -> usize {
        ((k as u128 * j as u128) % (2 * self.steps as u128)) as usize
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
/// Returns the best point seen, endpoints included.
pub fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, iterations: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut best = (a, f(a));
    let fb = f(b);
    if fb < best.1 {
        best = (b, fb);
    }
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iterations {
        if hi - lo <= f64::EPSILON * (1.0 + hi.abs()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    best
}
