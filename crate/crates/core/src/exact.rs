//! Exact arithmetic, rectangle descriptions and coordinate folding.
//!
//! A rectangle is described by how its side ratio behaves over the rationals:
//! a rational ratio `p/q`, an irrational ratio whose square `rho = c²/d²` is
//! rational, or a generic pair of sides whose squared ratio the caller asserts
//! to be irrational. The first two cases are handled with exact arithmetic
//! throughout; the generic case is floating point and everything concluded
//! for it is conditional on the caller's assertion.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::input("rational with zero denominator"));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The integer value, if the denominator is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn to_f64(&self) -> f64 {
        // Divide in floating point only after the big parts fit.
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => self.0.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// True iff this is the square of some rational.
    pub fn is_square(&self) -> bool {
        !self.numer().is_negative() && is_perfect_square(self.numer()) && is_perfect_square(self.denom())
    }

    /// Exact square root, when one exists.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if !self.is_square() {
            return None;
        }
        Some(Rational(BigRational::new(self.numer().sqrt(), self.denom().sqrt())))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn recip(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::input("reciprocal of zero"));
        }
        Ok(Rational(self.0.recip()))
    }
}

pub(crate) fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as with the primitive types.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"num/den"` or a bare integer `"num"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::input(format!("malformed rational {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from(n)),
        }
    }
}

/// Which of the three rationality cases a rectangle falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// `c²/d²` irrational: every eigenvalue is simple.
    C1,
    /// `c/d` irrational but `c²/d²` rational.
    C2,
    /// `c/d` rational.
    C3,
}

/// Exact description of a rectangle.
///
/// * `Rational { p, q }` is the rectangle `(0,p)×(0,q)` with `gcd(p,q) = 1`.
/// * `Quadratic { rho }` is `(0,√rho)×(0,1)`, `rho` a positive non-square rational.
/// * `Generic { c, d }` is `(0,c)×(0,d)`; `c²/d²` is asserted irrational by the caller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub enum RectangleClass {
    Rational { p: u64, q: u64 },
    Quadratic { rho: Rational },
    Generic { c: f64, d: f64 },
}

impl RectangleClass {
    pub fn rational(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::input("rational rectangle sides must be positive"));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::input(format!(
                "rational rectangle R({p},{q}) is not normalized (gcd = {})",
                p.gcd(&q)
            )));
        }
        Ok(RectangleClass::Rational { p, q })
    }

    pub fn quadratic(rho: Rational) -> Result<Self> {
        if !rho.is_positive() {
            return Err(Error::input("rho must be positive"));
        }
        if rho.is_square() {
            return Err(Error::input(format!(
                "rho = {rho} is the square of a rational; use a rational rectangle"
            )));
        }
        Ok(RectangleClass::Quadratic { rho })
    }

    /// The irrationality of `c²/d²` is taken on trust.
    pub fn generic(c: f64, d: f64) -> Result<Self> {
        if !(c.is_finite() && d.is_finite() && c > 0.0 && d > 0.0) {
            return Err(Error::input("generic rectangle sides must be positive and finite"));
        }
        Ok(RectangleClass::Generic { c, d })
    }

    /// Rectangle with exact rational sides, reduced to the coprime representative.
    pub fn from_rational_sides(c: &Rational, d: &Rational) -> Result<Self> {
        let (p, q, _) = normalize_ratio(c, d)?;
        let p = p.to_u64().ok_or_else(|| Error::input("side ratio numerator exceeds u64"))?;
        let q = q.to_u64().ok_or_else(|| Error::input("side ratio denominator exceeds u64"))?;
        RectangleClass::rational(p, q)
    }

    pub fn classify(&self) -> CaseTag {
        match self {
            RectangleClass::Rational { .. } => CaseTag::C3,
            RectangleClass::Quadratic { .. } => CaseTag::C2,
            RectangleClass::Generic { .. } => CaseTag::C1,
        }
    }

    /// Side lengths `(c, d)` as floating point.
    pub fn sides(&self) -> (f64, f64) {
        match self {
            RectangleClass::Rational { p, q } => (*p as f64, *q as f64),
            RectangleClass::Quadratic { rho } => (rho.to_f64().sqrt(), 1.0),
            RectangleClass::Generic { c, d } => (*c, *d),
        }
    }

    pub fn is_square(&self) -> bool {
        matches!(self, RectangleClass::Rational { p: 1, q: 1 })
    }
}

pub fn classify(rect: &RectangleClass) -> CaseTag {
    rect.classify()
}

/// Reduce the side ratio `c/d` to coprime integers `p/q` and return the
/// scale with `scale·p = c` and `scale·q = d`.
pub fn normalize_ratio(c: &Rational, d: &Rational) -> Result<(BigUint, BigUint, Rational)> {
    if !c.is_positive() || !d.is_positive() {
        return Err(Error::input("normalize_ratio needs positive sides"));
    }
    let ratio = c / d;
    let p = ratio.numer().clone();
    let q = ratio.denom().clone();
    let scale = c / &Rational::from_integer(p.clone());
    debug_assert_eq!(&scale * &Rational::from_integer(q.clone()), *d);
    let to_u = |n: BigInt| n.to_biguint().expect("positive by construction");
    Ok((to_u(p), to_u(q), scale))
}

/// Fold `x` onto `[0, p]` through the even, `2p`-periodic extension.
pub fn fold(x: f64, p: f64) -> f64 {
    let r = x.rem_euclid(2.0 * p);
    if r > p {
        2.0 * p - r
    } else {
        r
    }
}

/// The region an eigenfunction lives on.
///
/// Besides the rectangles there is the square `[0,2π]²` with the basis
/// `cos(mx)cos(ny)`; its spectral parameter is `m²+n²`, the same as the
/// unit square's, which is where lifted eigenfunctions end up.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Rect(RectangleClass),
    Square2Pi,
}

/// Coordinate direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Domain {
    pub fn classify(&self) -> CaseTag {
        match self {
            Domain::Rect(r) => r.classify(),
            Domain::Square2Pi => CaseTag::C3,
        }
    }

    /// The rectangle whose exact spectrum this domain shares.
    pub fn spectral_rect(&self) -> RectangleClass {
        match self {
            Domain::Rect(r) => r.clone(),
            Domain::Square2Pi => RectangleClass::Rational { p: 1, q: 1 },
        }
    }

    pub fn extent(&self, axis: Axis) -> f64 {
        match self {
            Domain::Rect(r) => {
                let (c, d) = r.sides();
                match axis {
                    Axis::X => c,
                    Axis::Y => d,
                }
            }
            Domain::Square2Pi => 2.0 * std::f64::consts::PI,
        }
    }

    /// Length `h` such that the cosine basis along `axis` is `cos(kπ t/h)`.
    pub fn half_period(&self, axis: Axis) -> f64 {
        match self {
            Domain::Rect(_) => self.extent(axis),
            Domain::Square2Pi => std::f64::consts::PI,
        }
    }

    /// `extent / half_period`, an integer.
    pub fn span(&self) -> u64 {
        match self {
            Domain::Rect(_) => 1,
            Domain::Square2Pi => 2,
        }
    }

    /// Multiplier turning the spectral parameter into the eigenvalue of `-Δ`.
    pub fn lambda_factor(&self) -> f64 {
        match self {
            Domain::Rect(_) => std::f64::consts::PI * std::f64::consts::PI,
            Domain::Square2Pi => 1.0,
        }
    }

    /// Neumann index of the periodic frequency 1 along either axis
    /// (`cos(2πt/extent)` equals `cos(factor·πt/half_period)`).
    pub fn periodic_factor(&self) -> u64 {
        2 / self.span()
    }

    pub fn is_square(&self) -> bool {
        match self {
            Domain::Rect(r) => r.is_square(),
            Domain::Square2Pi => true,
        }
    }

    pub fn edge_length(&self, edge: Edge) -> f64 {
        match edge {
            Edge::Bottom | Edge::Top => self.extent(Axis::X),
            Edge::Left | Edge::Right => self.extent(Axis::Y),
        }
    }

    /// Cartesian coordinates of a boundary point.
    pub fn point(&self, bp: &BoundaryPoint) -> (f64, f64) {
        let (c, d) = (self.extent(Axis::X), self.extent(Axis::Y));
        match bp.edge {
            Edge::Bottom => (bp.t, 0.0),
            Edge::Top => (bp.t, d),
            Edge::Left => (0.0, bp.t),
            Edge::Right => (c, bp.t),
        }
    }

    /// Slack allowed when testing membership of floating coordinates.
    pub(crate) fn slack(&self, axis: Axis) -> f64 {
        1e-12 * (1.0 + self.extent(axis))
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (c, d) = (self.extent(Axis::X), self.extent(Axis::Y));
        let (sx, sy) = (self.slack(Axis::X), self.slack(Axis::Y));
        x.is_finite() && y.is_finite() && x >= -sx && x <= c + sx && y >= -sy && y <= d + sy
    }

    pub fn check_boundary_point(&self, bp: &BoundaryPoint) -> Result<()> {
        let len = self.edge_length(bp.edge);
        let slack = 1e-12 * (1.0 + len);
        if !bp.t.is_finite() || bp.t < -slack || bp.t > len + slack {
            return Err(Error::input(format!(
                "boundary point t = {} outside edge {:?} of length {len}",
                bp.t, bp.edge
            )));
        }
        Ok(())
    }
}

/// An edge of the rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    /// `y = 0`
    Bottom,
    /// `y = d`
    Top,
    /// `x = 0`
    Left,
    /// `x = c`
    Right,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Bottom, Edge::Top, Edge::Left, Edge::Right];
}

impl FromStr for Edge {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bottom" => Ok(Edge::Bottom),
            "top" => Ok(Edge::Top),
            "left" => Ok(Edge::Left),
            "right" => Ok(Edge::Right),
            _ => Err(Error::input(format!("unknown edge {s:?}"))),
        }
    }
}

/// A point on the boundary: an edge and the coordinate along it
/// (`x` for bottom/top, `y` for left/right).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub edge: Edge,
    pub t: f64,
}

impl BoundaryPoint {
    pub fn new(edge: Edge, t: f64) -> Self {
        BoundaryPoint { edge, t }
    }

    /// The boundary point at `(x, y)` if it lies exactly on an edge of `[0,c]×[0,d]`.
    /// Corners are attributed to the bottom or top edge.
    pub fn at(x: f64, y: f64, c: f64, d: f64) -> Option<Self> {
        if y == 0.0 {
            Some(BoundaryPoint::new(Edge::Bottom, x))
        } else if y == d {
            Some(BoundaryPoint::new(Edge::Top, x))
        } else if x == 0.0 {
            Some(BoundaryPoint::new(Edge::Left, y))
        } else if x == c {
            Some(BoundaryPoint::new(Edge::Right, y))
        } else {
            None
        }
    }
}

// Shared JSON shape for rectangles and domains.
#[derive(Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case", deny_unknown_fields)]
enum ShapeRepr {
    Rational { p: u64, q: u64 },
    Quadratic { rho: Rational },
    Generic { c: f64, d: f64 },
    #[serde(rename = "square_2pi")]
    Square2Pi,
}

impl TryFrom<ShapeRepr> for RectangleClass {
    type Error = Error;
    fn try_from(r: ShapeRepr) -> Result<Self> {
        match r {
            ShapeRepr::Rational { p, q } => RectangleClass::rational(p, q),
            ShapeRepr::Quadratic { rho } => RectangleClass::quadratic(rho),
            ShapeRepr::Generic { c, d } => RectangleClass::generic(c, d),
            ShapeRepr::Square2Pi => Err(Error::input("square_2pi is a domain, not a rectangle class")),
        }
    }
}

impl From<RectangleClass> for ShapeRepr {
    fn from(r: RectangleClass) -> Self {
        match r {
            RectangleClass::Rational { p, q } => ShapeRepr::Rational { p, q },
            RectangleClass::Quadratic { rho } => ShapeRepr::Quadratic { rho },
            RectangleClass::Generic { c, d } => ShapeRepr::Generic { c, d },
        }
    }
}

impl Serialize for Domain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Domain::Rect(r) => r.serialize(serializer),
            Domain::Square2Pi => ShapeRepr::Square2Pi.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Domain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match ShapeRepr::deserialize(deserializer)? {
            ShapeRepr::Square2Pi => Ok(Domain::Square2Pi),
            other => RectangleClass::try_from(other)
                .map(Domain::Rect)
                .map_err(serde::de::Error::custom),
        }
    }
}

impl From<RectangleClass> for Domain {
    fn from(r: RectangleClass) -> Self {
        Domain::Rect(r)
    }
}

/// Total order on floats for argmin bookkeeping.
pub(crate) fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// `cos(πz)` with exact reduction of `z` modulo 2, so integer and
/// half-integer arguments give exact results.
pub fn cos_pi(z: f64) -> f64 {
    let r = z - 2.0 * (z * 0.5).round();
    let a = r.abs();
    if a == 0.0 {
        1.0
    } else if a == 1.0 {
        -1.0
    } else if a == 0.5 {
        0.0
    } else if a > 0.5 {
        -(std::f64::consts::PI * (1.0 - a)).cos()
    } else {
        (std::f64::consts::PI * a).cos()
    }
}

/// `sin(πz)` with exact reduction of `z` modulo 2.
pub fn sin_pi(z: f64) -> f64 {
    let r = z - 2.0 * (z * 0.5).round();
    let a = r.abs();
    let s = if a == 0.0 || a == 1.0 {
        0.0
    } else if a == 0.5 {
        1.0
    } else if a > 0.5 {
        (std::f64::consts::PI * (1.0 - a)).sin()
    } else {
        (std::f64::consts::PI * a).sin()
    };
    if r < 0.0 {
        -s
    } else {
        s
    }
}

/// Sign of `(-1)^k`.
pub(crate) fn parity_sign(k: u64) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Integer square root of a big integer (floor).
pub(crate) fn isqrt_big(n: &BigInt) -> BigInt {
    if n.sign() == Sign::Minus {
        BigInt::zero()
    } else {
        n.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn classify_follows_constructor() {
        assert_eq!(RectangleClass::rational(3, 2).unwrap().classify(), CaseTag::C3);
        assert_eq!(RectangleClass::quadratic(r(2, 1)).unwrap().classify(), CaseTag::C2);
        assert_eq!(
            RectangleClass::generic(1.0, 1.2599210498948732).unwrap().classify(),
            CaseTag::C1
        );
    }

    #[test]
    fn constructors_reject_invalid() {
        assert!(RectangleClass::rational(6, 4).is_err());
        assert!(RectangleClass::rational(0, 1).is_err());
        assert!(RectangleClass::quadratic(r(9, 4)).is_err());
        assert!(RectangleClass::quadratic(r(-2, 1)).is_err());
        assert!(RectangleClass::quadratic(r(4, 1)).is_err());
        assert!(RectangleClass::quadratic(r(8, 2)).is_err());
        assert!(RectangleClass::quadratic(r(5, 2)).is_ok());
        assert!(RectangleClass::generic(0.0, 1.0).is_err());
        assert!(RectangleClass::generic(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn normalize_ratio_examples() {
        let (p, q, s) = normalize_ratio(&r(6, 1), &r(4, 1)).unwrap();
        assert_eq!((p, q, s), (3u32.into(), 2u32.into(), r(2, 1)));
        let (p, q, s) = normalize_ratio(&r(1, 2), &r(1, 3)).unwrap();
        assert_eq!((p, q, s), (3u32.into(), 2u32.into(), r(1, 6)));
        let (p, q, s) = normalize_ratio(&r(5, 1), &r(5, 1)).unwrap();
        assert_eq!((p, q, s), (1u32.into(), 1u32.into(), r(5, 1)));
        assert!(normalize_ratio(&r(0, 1), &r(1, 1)).is_err());
        assert!(normalize_ratio(&r(1, 1), &r(-1, 1)).is_err());
    }

    #[test]
    fn fold_examples() {
        assert_eq!(fold(0.5, 1.0), 0.5);
        assert_eq!(fold(1.5, 1.0), 0.5);
        assert_eq!(fold(3.25, 1.0), 0.75);
        // even periodic test function agrees at x and fold(x)
        let f = |x: f64| (std::f64::consts::PI * x).cos() + 0.5 * (3.0 * std::f64::consts::PI * x).cos();
        assert!((f(3.25) - f(0.75)).abs() < 1e-12);
    }

    #[test]
    fn rational_parse_and_display() {
        assert_eq!("9/2".parse::<Rational>().unwrap(), r(9, 2));
        assert_eq!("-6/4".parse::<Rational>().unwrap(), r(-3, 2));
        assert_eq!("25".parse::<Rational>().unwrap().to_string(), "25/1");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
        assert_eq!(serde_json::to_string(&r(9, 2)).unwrap(), "\"9/2\"");
    }

    #[test]
    fn rectangle_json() {
        let rect: RectangleClass = serde_json::from_str(r#"{"case":"rational","p":3,"q":2}"#).unwrap();
        assert_eq!(rect, RectangleClass::Rational { p: 3, q: 2 });
        let rect: RectangleClass = serde_json::from_str(r#"{"case":"quadratic","rho":"2/1"}"#).unwrap();
        assert_eq!(serde_json::to_string(&rect).unwrap(), r#"{"case":"quadratic","rho":"2/1"}"#);
        let rect: RectangleClass =
            serde_json::from_str(r#"{"case":"generic","c":1.0,"d":1.2599210498948732}"#).unwrap();
        assert_eq!(rect.classify(), CaseTag::C1);
        assert!(serde_json::from_str::<RectangleClass>(r#"{"case":"quadratic","rho":"4/1"}"#).is_err());
        assert!(serde_json::from_str::<RectangleClass>(r#"{"case":"square_2pi"}"#).is_err());
        let dom: Domain = serde_json::from_str(r#"{"case":"square_2pi"}"#).unwrap();
        assert_eq!(dom, Domain::Square2Pi);
    }

    #[test]
    fn cos_pi_exact_points() {
        assert_eq!(cos_pi(0.0), 1.0);
        assert_eq!(cos_pi(1.0), -1.0);
        assert_eq!(cos_pi(7.0), -1.0);
        assert_eq!(cos_pi(-3.5), 0.0);
        assert_eq!(sin_pi(12.0), 0.0);
        assert_eq!(sin_pi(-0.5), -1.0);
        for i in 0..1000 {
            let z = -7.3 + i as f64 * 0.0191;
            assert!((cos_pi(z) - (std::f64::consts::PI * z).cos()).abs() < 1e-13);
            assert!((sin_pi(z) - (std::f64::consts::PI * z).sin()).abs() < 1e-13);
        }
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn rational_arithmetic_exact(a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b) / &b, a.clone());
            }
            let s = &a + &b;
            prop_assert!(s.denom().is_positive());
            prop_assert!(s.numer().gcd(s.denom()).is_one());
        }

        #[test]
        fn normalize_ratio_reconstructs(cn in 1i64..5000, cd in 1i64..5000, dn in 1i64..5000, dd in 1i64..5000) {
            let (c, d) = (r(cn, cd), r(dn, dd));
            let (p, q, scale) = normalize_ratio(&c, &d).unwrap();
            prop_assert!(p.gcd(&q).is_one());
            prop_assert_eq!(&scale * &Rational::from_integer(BigInt::from(p)), c);
            prop_assert_eq!(&scale * &Rational::from_integer(BigInt::from(q)), d);
        }

        #[test]
        fn fold_properties(x in -100.0f64..100.0, p in 0.1f64..10.0, m in 0u32..40) {
            let f = fold(x, p);
            prop_assert!((0.0..=p).contains(&f));
            prop_assert_eq!(fold(f, p), f);
            let lhs = (m as f64 * std::f64::consts::PI * f / p).cos();
            let rhs = (m as f64 * std::f64::consts::PI * x / p).cos();
            // absolute error grows with the size of the unreduced argument
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + m as f64 * x.abs() / p));
        }

        #[test]
        fn rational_json_roundtrip(a in arb_rational()) {
            let s = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<Rational>(&s).unwrap(), a);
        }
    }
}
