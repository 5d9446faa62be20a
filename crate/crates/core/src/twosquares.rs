//! Two-adic decomposition of integers and the parity of their
//! representations as sums of two squares.
//!
//! Every positive integer is `4^s·(2ℓ+1)` or `2·4^s·(2ℓ+1)`. In the first case
//! each representation `λ = m² + n²` has `2^s | m, n` with `(m/2^s, n/2^s)` of
//! opposite parity; in the second both reduced coordinates are odd.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::ModeIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Core {
    /// `λ = 4^s·(2ℓ+1)`
    #[serde(rename = "odd")]
    OddCore,
    /// `λ = 2·4^s·(2ℓ+1)`
    #[serde(rename = "twice_odd")]
    TwiceOddCore,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSquaresClass {
    pub s: u32,
    pub ell: BigUint,
    pub core: Core,
}

impl TwoSquaresClass {
    pub fn reconstruct(&self) -> BigUint {
        let odd = &self.ell * 2u32 + 1u32;
        let base = odd << (2 * self.s as usize);
        match self.core {
            Core::OddCore => base,
            Core::TwiceOddCore => base * 2u32,
        }
    }

    pub fn predicted(&self) -> ParityClass {
        match self.core {
            Core::OddCore => ParityClass::ClassJ,
            Core::TwiceOddCore => ParityClass::ClassI,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityClass {
    /// both coordinates odd
    #[serde(rename = "I")]
    ClassI,
    /// exactly one coordinate odd
    #[serde(rename = "J")]
    ClassJ,
    /// both even
    #[serde(rename = "neither")]
    Neither,
}

pub fn decompose(lam: &BigUint) -> Result<TwoSquaresClass> {
    let tz = lam.trailing_zeros().ok_or_else(|| Error::input("decompose needs lam >= 1"))?;
    let s = u32::try_from(tz / 2).map_err(|_| Error::input("lam too large"))?;
    let rest = lam >> (2 * s as usize);
    let (core, odd) = if tz.is_multiple_of(2) { (Core::OddCore, rest) } else { (Core::TwiceOddCore, rest >> 1) };
    Ok(TwoSquaresClass { s, ell: (odd - BigUint::one()) >> 1, core })
}

pub fn decompose_u64(lam: u64) -> Result<TwoSquaresClass> {
    decompose(&BigUint::from(lam))
}

/// `(s, core)` without allocation, for sweeps.
pub(crate) fn decompose_small(lam: u64) -> (u32, Core) {
    debug_assert!(lam > 0);
    let tz = lam.trailing_zeros();
    let core = if tz.is_multiple_of(2) { Core::OddCore } else { Core::TwiceOddCore };
    (tz / 2, core)
}

pub fn parity_class(pair: ModeIndex) -> ParityClass {
    match (pair.m % 2, pair.n % 2) {
        (1, 1) => ParityClass::ClassI,
        (0, 0) => ParityClass::Neither,
        _ => ParityClass::ClassJ,
    }
}

pub fn predicted_class(lam: &BigUint) -> Result<(u32, ParityClass)> {
    let class = decompose(lam)?;
    Ok((class.s, class.predicted()))
}

/// All ordered `(m, n)` with `m² + n² = lam` and `m + n > 0`.
pub fn representations(lam: u64) -> Vec<ModeIndex> {
    let mut reps = Vec::new();
    let lam = lam as u128;
    let top = lam.sqrt();
    for m in 0..=top {
        let rest = lam - m * m;
        let n = rest.sqrt();
        if n * n == rest && m + n > 0 {
            reps.push(ModeIndex::new(m as u64, n as u64));
        }
    }
    reps
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub m: u64,
    pub n: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub lam: u64,
    pub s: u32,
    pub core: Core,
    pub class: ParityClass,
    pub representations: Vec<(u64, u64)>,
    pub pass: bool,
    pub violations: Vec<Violation>,
    /// `λ = 4·(2ℓ+1)`: the zero sits at `x* = π/2`, the smallest `s` of the
    /// odd-core family with `s ≥ 1`.
    pub s_equals_one: bool,
}

pub fn check_proposition(lam: u64) -> Result<PropositionReport> {
    if lam == 0 {
        return Err(Error::input("check_proposition needs lam >= 1"));
    }
    Ok(check_representations(lam, &representations(lam)))
}

pub(crate) fn check_representations(lam: u64, reps: &[ModeIndex]) -> PropositionReport {
    let (s, core) = decompose_small(lam);
    let class = match core {
        Core::OddCore => ParityClass::ClassJ,
        Core::TwiceOddCore => ParityClass::ClassI,
    };
    let step = 1u64 << s;
    let mut violations = Vec::new();
    for rep in reps {
        if rep.m % step != 0 || rep.n % step != 0 {
            violations.push(Violation {
                m: rep.m,
                n: rep.n,
                reason: format!("2^{s} does not divide both coordinates"),
            });
            continue;
        }
        let reduced = ModeIndex::new(rep.m / step, rep.n / step);
        let got = parity_class(reduced);
        if got != class {
            violations.push(Violation {
                m: rep.m,
                n: rep.n,
                reason: format!("reduced pair ({}, {}) is {got:?}, expected {class:?}", reduced.m, reduced.n),
            });
        }
    }
    PropositionReport {
        lam,
        s,
        core,
        class,
        representations: reps.iter().map(|r| (r.m, r.n)).collect(),
        pass: violations.is_empty(),
        violations,
        s_equals_one: core == Core::OddCore && s == 1,
    }
}

/// Representations of every `λ ≤ lam_max` from one scan of the quarter disc,
/// as a flat table indexed by `λ` (counting sort, ascending `m` within each `λ`).
pub(crate) struct RepresentationTable {
    offsets: Vec<usize>,
    reps: Vec<ModeIndex>,
}

impl RepresentationTable {
    pub(crate) fn build(lam_max: u64) -> Self {
        let size = lam_max as usize + 1;
        let top = lam_max.sqrt();
        let mut counts = vec![0usize; size + 1];
        let each = |f: &mut dyn FnMut(u64, u64)| {
            for m in 0..=top {
                let n_top = (lam_max - m * m).sqrt();
                for n in 0..=n_top {
                    if m + n > 0 {
                        f(m, n);
                    }
                }
            }
        };
        each(&mut |m, n| counts[(m * m + n * n) as usize + 1] += 1);
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut reps = vec![ModeIndex::new(0, 0); offsets[size]];
        each(&mut |m, n| {
            let lam = (m * m + n * n) as usize;
            reps[cursor[lam]] = ModeIndex::new(m, n);
            cursor[lam] += 1;
        });
        RepresentationTable { offsets, reps }
    }

    pub(crate) fn get(&self, lam: u64) -> &[ModeIndex] {
        let i = lam as usize;
        &self.reps[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// JSON shape of the `decompose` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub lam: u64,
    pub s: u32,
    pub ell: u64,
    pub core: Core,
    pub class: ParityClass,
}

impl DecomposeReport {
    pub fn new(lam: u64) -> Result<Self> {
        let d = decompose_u64(lam)?;
        Ok(DecomposeReport {
            lam,
            s: d.s,
            ell: d.ell.to_u64().expect("ell < lam"),
            core: d.core,
            class: d.predicted(),
        })
    }
}
