//! Exact Neumann spectra.
//!
//! With the factor π² pulled out, the eigenvalue of `cos(mπx/c)cos(nπy/d)`
//! is `μ = m²/c² + n²/d²`. For the rational and quadratic classes this is a
//! rational number of the form `(wx·m² + wy·n²)/D` with fixed integers, so
//! degeneracy is decided by comparing integers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{is_perfect_square, isqrt_big, Rational, RectangleClass};

/// A lattice pair `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub m: u64,
    pub n: u64,
}

impl ModeIndex {
    pub const fn new(m: u64, n: u64) -> Self {
        ModeIndex { m, n }
    }

    pub fn swapped(self) -> Self {
        ModeIndex { m: self.n, n: self.m }
    }

    pub fn is_constant(self) -> bool {
        self.m == 0 && self.n == 0
    }
}

impl From<(u64, u64)> for ModeIndex {
    fn from((m, n): (u64, u64)) -> Self {
        ModeIndex { m, n }
    }
}

/// `μ = λ/π²`; exact for the rational and quadratic classes.
#[derive(Clone, PartialEq)]
pub enum SpectralParam {
    Exact(Rational),
    Approx(f64),
}

impl SpectralParam {
    pub fn to_f64(&self) -> f64 {
        match self {
            SpectralParam::Exact(r) => r.to_f64(),
            SpectralParam::Approx(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SpectralParam::Exact(r) => r.is_zero(),
            SpectralParam::Approx(x) => *x == 0.0,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            SpectralParam::Exact(r) => Some(r),
            SpectralParam::Approx(_) => None,
        }
    }

    /// Same eigenvalue: exact equality, or relative `1e-12` for floating values.
    pub fn matches(&self, other: &SpectralParam) -> bool {
        match (self, other) {
            (SpectralParam::Exact(a), SpectralParam::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
            }
        }
    }

    /// Bring a parsed value into the representation the rectangle uses.
    pub fn coerce_for(self, rect: &RectangleClass) -> Result<SpectralParam> {
        match (rect, self) {
            (RectangleClass::Generic { .. }, p) => Ok(SpectralParam::Approx(p.to_f64())),
            (_, SpectralParam::Exact(r)) => Ok(SpectralParam::Exact(r)),
            (_, SpectralParam::Approx(x)) => {
                if x.is_finite() && x.fract() == 0.0 && x.abs() < 9.0e15 {
                    Ok(SpectralParam::Exact(Rational::from(x as i64)))
                } else {
                    Err(Error::input(format!(
                        "spectral parameter {x} must be given exactly (as \"num/den\") for this rectangle"
                    )))
                }
            }
        }
    }
}

impl fmt::Debug for SpectralParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralParam::Exact(r) => write!(f, "{r}"),
            SpectralParam::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Display for SpectralParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for SpectralParam {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpectralParam::Exact(r) => r.serialize(serializer),
            SpectralParam::Approx(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for SpectralParam {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Num(f64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map(SpectralParam::Exact).map_err(serde::de::Error::custom),
            Repr::Num(x) if x.is_finite() && x >= 0.0 => Ok(SpectralParam::Approx(x)),
            Repr::Num(x) => Err(serde::de::Error::custom(format!("invalid spectral parameter {x}"))),
        }
    }
}

/// The index set `I(μ)`: every lattice pair with eigenvalue `μ`, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModeSet {
    pub modes: Vec<ModeIndex>,
}

impl ModeSet {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn contains(&self, mode: ModeIndex) -> bool {
        self.modes.binary_search(&mode).is_ok()
    }

    /// Some `(m, 0)` with `m > 0` belongs to the set.
    pub fn has_x_axis_mode(&self) -> bool {
        self.modes.iter().any(|md| md.m > 0 && md.n == 0)
    }

    /// Some `(0, n)` with `n > 0` belongs to the set.
    pub fn has_y_axis_mode(&self) -> bool {
        self.modes.iter().any(|md| md.m == 0 && md.n > 0)
    }

    fn from_unsorted(mut modes: Vec<ModeIndex>) -> Self {
        modes.sort_unstable();
        modes.dedup();
        ModeSet { modes }
    }
}

/// `μ·D = wx·m² + wy·n²` for the exact classes.
struct Weights {
    wx: BigInt,
    wy: BigInt,
    den: BigInt,
}

impl Weights {
    fn of(rect: &RectangleClass) -> Option<Weights> {
        match rect {
            RectangleClass::Rational { p, q } => {
                let (p2, q2) = (BigInt::from(*p) * *p, BigInt::from(*q) * *q);
                Some(Weights { den: &p2 * &q2, wx: q2, wy: p2 })
            }
            RectangleClass::Quadratic { rho } => {
                // m²/rho + n² = (m²·b + n²·a)/a for rho = a/b
                let (a, b) = (rho.numer().clone(), rho.denom().clone());
                Some(Weights { wx: b, wy: a.clone(), den: a })
            }
            RectangleClass::Generic { .. } => None,
        }
    }

    fn key(&self, mode: ModeIndex) -> BigInt {
        let (m, n) = (BigInt::from(mode.m), BigInt::from(mode.n));
        &self.wx * &m * &m + &self.wy * &n * &n
    }

    fn param(&self, key: BigInt) -> SpectralParam {
        SpectralParam::Exact(Rational::new(key, self.den.clone()).expect("positive denominator"))
    }

    /// `floor(μ·D)`, or `None` when `μ·D` is not an integer and `exact` is requested.
    fn scaled(&self, mu: &Rational, exact: bool) -> Option<BigInt> {
        let scaled = mu * &Rational::from_integer(self.den.clone());
        if exact && !scaled.is_integer() {
            return None;
        }
        Some(scaled.floor())
    }
}

/// Eigenvalue (over π²) of the mode on the rectangle.
pub fn eigenvalue(rect: &RectangleClass, mode: ModeIndex) -> SpectralParam {
    match Weights::of(rect) {
        Some(w) => w.param(w.key(mode)),
        None => {
            let (c, d) = rect.sides();
            let (m, n) = (mode.m as f64, mode.n as f64);
            SpectralParam::Approx(m * m / (c * c) + n * n / (d * d))
        }
    }
}

fn to_u64(n: &BigInt) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::input(format!("mode index {n} exceeds u64")))
}

fn exact_param(rect: &RectangleClass, mu: &SpectralParam) -> Result<(Weights, Rational)> {
    let w = Weights::of(rect).ok_or(Error::NotExactlyEnumerable)?;
    match mu {
        SpectralParam::Exact(r) if !r.numer().is_negative() => Ok((w, r.clone())),
        SpectralParam::Exact(r) => Err(Error::input(format!("negative spectral parameter {r}"))),
        SpectralParam::Approx(_) => Err(Error::input("exact spectral parameter required")),
    }
}

/// All modes with eigenvalue exactly `mu`. Empty when `mu` is not attained.
pub fn index_set(rect: &RectangleClass, mu: &SpectralParam) -> Result<ModeSet> {
    let (w, mu) = exact_param(rect, mu)?;
    let Some(target) = w.scaled(&mu, true) else {
        return Ok(ModeSet::default());
    };
    let mut modes = Vec::new();
    let m_max = isqrt_big(&(&target / &w.wx));
    let mut m = BigInt::zero();
    while m <= m_max {
        let rest = &target - &w.wx * &m * &m;
        let (n2, r) = rest.div_rem(&w.wy);
        if r.is_zero() && is_perfect_square(&n2) {
            modes.push(ModeIndex::new(to_u64(&m)?, to_u64(&isqrt_big(&n2))?));
        }
        m += 1;
    }
    Ok(ModeSet::from_unsorted(modes))
}

/// Every distinct eigenvalue `μ ≤ mu_max` with its index set, ascending.
pub fn enumerate(rect: &RectangleClass, mu_max: &SpectralParam) -> Result<Vec<(SpectralParam, ModeSet)>> {
    let (w, mu_max) = exact_param(rect, mu_max)?;
    let limit = w.scaled(&mu_max, false).expect("floor always exists");
    let mut buckets: BTreeMap<BigInt, Vec<ModeIndex>> = BTreeMap::new();
    let m_max = to_u64(&isqrt_big(&(&limit / &w.wx)))?;
    for m in 0..=m_max {
        let base = &w.wx * BigInt::from(m) * BigInt::from(m);
        let n_max = to_u64(&isqrt_big(&((&limit - &base) / &w.wy)))?;
        for n in 0..=n_max {
            let key = &base + &w.wy * BigInt::from(n) * BigInt::from(n);
            buckets.entry(key).or_default().push(ModeIndex::new(m, n));
        }
    }
    let quadratic = matches!(rect, RectangleClass::Quadratic { .. });
    buckets
        .into_iter()
        .map(|(key, modes)| {
            let set = ModeSet::from_unsorted(modes);
            if quadratic && set.has_x_axis_mode() && set.has_y_axis_mode() {
                return Err(Error::InconsistentSpectrum(format!(
                    "index set {:?} holds both axis modes on a rectangle with irrational side ratio",
                    set.modes
                )));
            }
            Ok((w.param(key), set))
        })
        .collect()
}

/// One line of the `spectrum` subcommand output.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    pub mu: SpectralParam,
    pub modes: Vec<(u64, u64)>,
}

impl SpectrumLine {
    pub fn new(mu: &SpectralParam, set: &ModeSet) -> Self {
        SpectrumLine { mu: mu.clone(), modes: set.modes.iter().map(|md| (md.m, md.n)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> SpectralParam {
        SpectralParam::Exact(Rational::new(n, d).unwrap())
    }

    fn modes(v: &[(u64, u64)]) -> ModeSet {
        ModeSet::from_unsorted(v.iter().map(|&p| p.into()).collect())
    }

    fn sq() -> RectangleClass {
        RectangleClass::rational(1, 1).unwrap()
    }

    fn quad2() -> RectangleClass {
        RectangleClass::quadratic(Rational::from(2u64)).unwrap()
    }

    // brute force over the box m <= mb, n <= nb with exact rational arithmetic
    fn brute(rect: &RectangleClass, mu: &SpectralParam, mb: u64, nb: u64) -> ModeSet {
        let mut out = Vec::new();
        for m in 0..=mb {
            for n in 0..=nb {
                if eigenvalue(rect, ModeIndex::new(m, n)) == *mu {
                    out.push(ModeIndex::new(m, n));
                }
            }
        }
        ModeSet::from_unsorted(out)
    }

    #[test]
    fn eigenvalue_examples() {
        let r21 = RectangleClass::rational(2, 1).unwrap();
        assert_eq!(eigenvalue(&r21, ModeIndex::new(2, 3)), rat(10, 1));
        assert_eq!(eigenvalue(&r21, ModeIndex::new(0, 0)), rat(0, 1));
        assert_eq!(eigenvalue(&quad2(), ModeIndex::new(3, 0)), rat(9, 2));
        let g = RectangleClass::generic(1.0, 2.0).unwrap();
        assert_eq!(eigenvalue(&g, ModeIndex::new(0, 0)).to_f64(), 0.0);
        assert_eq!(eigenvalue(&g, ModeIndex::new(1, 2)).to_f64(), 2.0);
    }

    #[test]
    fn index_set_examples() {
        let expect = modes(&[(0, 5), (3, 4), (4, 3), (5, 0)]);
        assert_eq!(brute(&sq(), &rat(25, 1), 5, 5), expect);
        assert_eq!(index_set(&sq(), &rat(25, 1)).unwrap(), expect);

        let expect = modes(&[(3, 0), (1, 2)]);
        assert_eq!(brute(&quad2(), &rat(9, 2), 3, 2), expect);
        assert_eq!(index_set(&quad2(), &rat(9, 2)).unwrap(), expect);

        assert!(brute(&sq(), &rat(12, 1), 3, 3).is_empty());
        assert!(index_set(&sq(), &rat(12, 1)).unwrap().is_empty());
        // non-integral targets are never attained on the unit square
        assert!(index_set(&sq(), &rat(1, 2)).unwrap().is_empty());
    }

    #[test]
    fn index_set_rejects_generic() {
        let g = RectangleClass::generic(1.0, 1.2599210498948732).unwrap();
        assert!(matches!(index_set(&g, &rat(1, 1)), Err(Error::NotExactlyEnumerable)));
        assert!(matches!(enumerate(&g, &rat(1, 1)), Err(Error::NotExactlyEnumerable)));
    }

    #[test]
    fn enumerate_examples() {
        let got = enumerate(&sq(), &rat(2, 1)).unwrap();
        assert_eq!(
            got,
            vec![
                (rat(0, 1), modes(&[(0, 0)])),
                (rat(1, 1), modes(&[(0, 1), (1, 0)])),
                (rat(2, 1), modes(&[(1, 1)])),
            ]
        );
        let r21 = RectangleClass::rational(2, 1).unwrap();
        assert_eq!(
            enumerate(&r21, &rat(1, 1)).unwrap(),
            vec![
                (rat(0, 1), modes(&[(0, 0)])),
                (rat(1, 4), modes(&[(1, 0)])),
                (rat(1, 1), modes(&[(2, 0), (0, 1)])),
            ]
        );
        assert_eq!(
            enumerate(&quad2(), &rat(1, 1)).unwrap(),
            vec![
                (rat(0, 1), modes(&[(0, 0)])),
                (rat(1, 2), modes(&[(1, 0)])),
                (rat(1, 1), modes(&[(0, 1)])),
            ]
        );
    }

    #[test]
    fn enumerate_agrees_with_brute_force() {
        let rects = [
            sq(),
            RectangleClass::rational(2, 1).unwrap(),
            RectangleClass::rational(3, 2).unwrap(),
            quad2(),
            RectangleClass::quadratic(Rational::new(5, 2).unwrap()).unwrap(),
        ];
        for rect in &rects {
            let mu_max = rat(40, 1);
            let list = enumerate(rect, &mu_max).unwrap();
            let (c, d) = rect.sides();
            let (mb, nb) = ((40f64.sqrt() * c).ceil() as u64 + 1, (40f64.sqrt() * d).ceil() as u64 + 1);
            let mut seen = 0;
            for w in list.windows(2) {
                assert!(w[0].0.to_f64() < w[1].0.to_f64());
            }
            for (mu, set) in &list {
                assert_eq!(&brute(rect, mu, mb, nb), set, "{rect:?} mu={mu}");
                assert_eq!(&index_set(rect, mu).unwrap(), set);
                seen += set.len();
            }
            let total = (0..=mb)
                .flat_map(|m| (0..=nb).map(move |n| ModeIndex::new(m, n)))
                .filter(|md| eigenvalue(rect, *md).to_f64() <= 40.0 + 1e-9)
                .count();
            assert_eq!(seen, total);
        }
    }

    #[test]
    fn square_index_sets_are_symmetric() {
        for (_, set) in enumerate(&sq(), &rat(500, 1)).unwrap() {
            for md in &set.modes {
                assert!(set.contains(md.swapped()));
            }
        }
    }

    #[test]
    fn quadratic_sets_never_hold_both_axis_modes() {
        for rho in [rat(2, 1), rat(3, 1), rat(5, 2), rat(7, 3)] {
            let rect = RectangleClass::quadratic(rho.exact().unwrap().clone()).unwrap();
            for (_, set) in enumerate(&rect, &rat(300, 1)).unwrap() {
                assert!(!(set.has_x_axis_mode() && set.has_y_axis_mode()));
            }
        }
    }

    #[test]
    fn spectrum_line_json() {
        let set = index_set(&sq(), &rat(25, 1)).unwrap();
        let line = SpectrumLine::new(&rat(25, 1), &set);
        assert_eq!(
            serde_json::to_string(&line).unwrap(),
            r#"{"mu":"25/1","modes":[[0,5],[3,4],[4,3],[5,0]]}"#
        );
    }
}
