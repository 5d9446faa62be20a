//! Eigenfunctions as sparse coefficient vectors over separated trigonometric
//! bases, their boundary traces, and the coefficient-space maps used to
//! bring any eigenfunction into a form whose boundary values are forced.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{cos_pi, parity_sign, sin_pi, Axis, Domain, Edge, Rational, RectangleClass};
use crate::spectrum::{eigenvalue, index_set, ModeIndex, SpectralParam};

/// Which boundary conditions the expansion is written for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `cos(mπx/c)·cos(nπy/d)`.
    #[serde(rename = "neumann")]
    NeumannCosine,
    /// Periodic in both directions: `{cos,sin}(2πmx/c)·{cos,sin}(2πny/d)`.
    #[serde(rename = "torus")]
    TorusFull,
    /// Periodic in `x`, Neumann in `y`: `{cos,sin}(2πmx/c)·cos(nπy/d)`.
    #[serde(rename = "cylinder")]
    CylinderMixed,
}

/// Sparse map `(m, n) → a_{m,n}` with no stored zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoefficientVector {
    entries: BTreeMap<ModeIndex, f64>,
}

impl CoefficientVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Zeros are dropped; a repeated mode is an error.
    pub fn from_pairs<I: IntoIterator<Item = (ModeIndex, f64)>>(pairs: I) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (mode, a) in pairs {
            if !a.is_finite() {
                return Err(Error::input(format!("non-finite coefficient at ({}, {})", mode.m, mode.n)));
            }
            if entries.insert(mode, a).is_some() {
                return Err(Error::input(format!("duplicate mode ({}, {})", mode.m, mode.n)));
            }
        }
        entries.retain(|_, a| *a != 0.0);
        Ok(CoefficientVector { entries })
    }

    pub fn get(&self, mode: ModeIndex) -> f64 {
        self.entries.get(&mode).copied().unwrap_or(0.0)
    }

    /// Adds `a` to the entry, removing it if the sum is zero.
    pub fn add(&mut self, mode: ModeIndex, a: f64) {
        let v = self.entries.entry(mode).or_insert(0.0);
        *v += a;
        if *v == 0.0 {
            self.entries.remove(&mode);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, f64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |acc, a| acc.max(a.abs()))
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.entries.values_mut().for_each(|a| *a *= alpha);
        out.entries.retain(|_, a| *a != 0.0);
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(md, a)| self.get(md.swapped()) == a)
    }

    fn filter(&self, keep: impl Fn(ModeIndex) -> bool) -> Self {
        CoefficientVector { entries: self.entries.iter().filter(|(k, _)| keep(**k)).map(|(k, v)| (*k, *v)).collect() }
    }
}

/// One factor `cos(kπt/h)` or `sin(kπt/h)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wave {
    pub sine: bool,
    pub index: u64,
    pub half_period: f64,
}

impl Wave {
    pub fn value(&self, t: f64) -> f64 {
        let z = self.index as f64 * (t / self.half_period);
        if self.sine {
            sin_pi(z)
        } else {
            cos_pi(z)
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let z = self.index as f64 * (t / self.half_period);
        let w = self.index as f64 * std::f64::consts::PI / self.half_period;
        if self.sine {
            w * cos_pi(z)
        } else {
            -w * sin_pi(z)
        }
    }

    /// Angular frequency `kπ/h`.
    pub fn frequency(&self) -> f64 {
        self.index as f64 * std::f64::consts::PI / self.half_period
    }
}

/// A separated term `a · X(x) · Y(y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub a: f64,
    pub x: Wave,
    pub y: Wave,
}

impl Term {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.a * self.x.value(x) * self.y.value(y)
    }
}

/// A trigonometric expansion on a domain, with no eigenvalue constraint.
///
/// `cc` holds the `cos·cos` coefficients; the other maps are only used by
/// the periodic bases (`cs = cos x · sin y`, `sc = sin x · cos y`,
/// `ss = sin x · sin y`). Periodic indices count full periods per side.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub domain: Domain,
    pub basis: Basis,
    pub cc: CoefficientVector,
    pub cs: CoefficientVector,
    pub sc: CoefficientVector,
    pub ss: CoefficientVector,
}

impl Expansion {
    pub fn neumann(domain: Domain, cc: CoefficientVector) -> Self {
        Expansion {
            domain,
            basis: Basis::NeumannCosine,
            cc,
            cs: CoefficientVector::new(),
            sc: CoefficientVector::new(),
            ss: CoefficientVector::new(),
        }
    }

    fn periodic(&self, axis: Axis) -> bool {
        match (self.basis, axis) {
            (Basis::NeumannCosine, _) => false,
            (Basis::TorusFull, _) => true,
            (Basis::CylinderMixed, Axis::X) => true,
            (Basis::CylinderMixed, Axis::Y) => false,
        }
    }

    /// Neumann-convention index of frequency `k` along `axis`.
    fn neumann_index(&self, axis: Axis, k: u64) -> u64 {
        if self.periodic(axis) {
            k * self.domain.periodic_factor()
        } else {
            k
        }
    }

    fn wave(&self, axis: Axis, k: u64, sine: bool) -> Wave {
        Wave { sine, index: self.neumann_index(axis, k), half_period: self.domain.half_period(axis) }
    }

    pub fn terms(&self) -> Vec<Term> {
        let maps = [(&self.cc, false, false), (&self.cs, false, true), (&self.sc, true, false), (&self.ss, true, true)];
        let mut out = Vec::new();
        for (map, sx, sy) in maps {
            for (md, a) in map.iter() {
                out.push(Term { a, x: self.wave(Axis::X, md.m, sx), y: self.wave(Axis::Y, md.n, sy) });
            }
        }
        out
    }

    /// Value at `(x, y)`; no domain check.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.terms().iter().map(|t| t.value(x, y)).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        [&self.cc, &self.cs, &self.sc, &self.ss].iter().fold(0.0, |acc, m| acc.max(m.max_abs()))
    }

    pub fn add(&self, other: &Expansion) -> Result<Expansion> {
        if self.domain != other.domain || self.basis != other.basis {
            return Err(Error::input("cannot add expansions over different domains or bases"));
        }
        let mut out = self.clone();
        for (dst, src) in [(&mut out.cc, &other.cc), (&mut out.cs, &other.cs), (&mut out.sc, &other.sc), (&mut out.ss, &other.ss)] {
            for (md, a) in src.iter() {
                dst.add(md, a);
            }
        }
        Ok(out)
    }

    /// Keep only the `cos·cos` part, rewritten in the Neumann cosine basis.
    ///
    /// Pointwise this is the average of the function over the reflections
    /// `x → c − x` (and `y → d − y` on the torus) in the periodic directions.
    pub fn drop_sines(&self) -> Expansion {
        if self.basis == Basis::NeumannCosine {
            return self.clone();
        }
        let mut cc = CoefficientVector::new();
        for (md, a) in self.cc.iter() {
            cc.add(ModeIndex::new(self.neumann_index(Axis::X, md.m), self.neumann_index(Axis::Y, md.n)), a);
        }
        Expansion::neumann(self.domain.clone(), cc)
    }

    /// Reflections that fix the function's `cos·cos` part and map the
    /// boundary to itself: one per periodic direction.
    pub fn periodic_reflections(&self) -> (bool, bool) {
        (self.periodic(Axis::X), self.periodic(Axis::Y))
    }
}

/// A Neumann, torus or cylinder eigenfunction with its exact spectral parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenfunction {
    expansion: Expansion,
    mu: SpectralParam,
}

impl Eigenfunction {
    /// Checks that every supported mode has eigenvalue `mu` and that the
    /// coefficient maps fit the basis.
    pub fn new(expansion: Expansion, mu: SpectralParam) -> Result<Self> {
        let rect = expansion.domain.spectral_rect();
        let mu = mu.coerce_for(&rect)?;
        if mu.to_f64() < 0.0 {
            return Err(Error::input("spectral parameter must be non-negative"));
        }
        let allowed = match expansion.basis {
            Basis::NeumannCosine => (false, false, false),
            Basis::TorusFull => (true, true, true),
            Basis::CylinderMixed => (false, true, false),
        };
        for (name, map, ok) in [("coeffs_cs", &expansion.cs, allowed.0), ("coeffs_sc", &expansion.sc, allowed.1), ("coeffs_ss", &expansion.ss, allowed.2)] {
            if !ok && !map.is_empty() {
                return Err(Error::input(format!("{name} is not part of the {:?} basis", expansion.basis)));
            }
        }
        let checks = [
            ("coeffs", &expansion.cc, false, false),
            ("coeffs_cs", &expansion.cs, false, true),
            ("coeffs_sc", &expansion.sc, true, false),
            ("coeffs_ss", &expansion.ss, true, true),
        ];
        for (name, map, sx, sy) in checks {
            for md in map.modes() {
                if (sx && md.m == 0) || (sy && md.n == 0) {
                    return Err(Error::input(format!(
                        "{name}: mode ({}, {}) has a sine of frequency zero",
                        md.m, md.n
                    )));
                }
                let idx = ModeIndex::new(expansion.neumann_index(Axis::X, md.m), expansion.neumann_index(Axis::Y, md.n));
                let ev = eigenvalue(&rect, idx);
                if !ev.matches(&mu) {
                    return Err(Error::input(format!(
                        "{name}: mode ({}, {}) has eigenvalue {ev}, not {mu}",
                        md.m, md.n
                    )));
                }
            }
        }
        Ok(Eigenfunction { expansion, mu })
    }

    pub fn neumann(domain: Domain, mu: SpectralParam, coeffs: CoefficientVector) -> Result<Self> {
        Eigenfunction::new(Expansion::neumann(domain, coeffs), mu)
    }

    /// Neumann eigenfunction from `(m, n, a)` triples; `mu` is read off the first mode.
    pub fn from_modes(domain: impl Into<Domain>, modes: &[(u64, u64, f64)]) -> Result<Self> {
        let domain = domain.into();
        let first = modes.first().ok_or_else(|| Error::input("no modes given"))?;
        let mu = eigenvalue(&domain.spectral_rect(), ModeIndex::new(first.0, first.1));
        let coeffs = CoefficientVector::from_pairs(modes.iter().map(|&(m, n, a)| (ModeIndex::new(m, n), a)))?;
        Eigenfunction::neumann(domain, mu, coeffs)
    }

    pub fn constant(domain: impl Into<Domain>, value: f64) -> Result<Self> {
        let coeffs = CoefficientVector::from_pairs([(ModeIndex::new(0, 0), value)])?;
        Eigenfunction::neumann(domain.into(), SpectralParam::Exact(Rational::zero()), coeffs)
    }

    pub fn domain(&self) -> &Domain {
        &self.expansion.domain
    }

    pub fn basis(&self) -> Basis {
        self.expansion.basis
    }

    pub fn mu(&self) -> &SpectralParam {
        &self.mu
    }

    /// The `cos·cos` coefficients.
    pub fn coeffs(&self) -> &CoefficientVector {
        &self.expansion.cc
    }

    pub fn expansion(&self) -> &Expansion {
        &self.expansion
    }

    /// Eigenvalue of `-Δ`.
    pub fn lambda(&self) -> f64 {
        self.domain().lambda_factor() * self.mu.to_f64()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.expansion.max_abs_coeff()
    }

    /// Identically constant (including the zero function).
    pub fn is_constant(&self) -> bool {
        let e = &self.expansion;
        e.cs.is_empty() && e.sc.is_empty() && e.ss.is_empty() && e.cc.modes().all(|md| md.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        let e = &self.expansion;
        e.cc.is_empty() && e.cs.is_empty() && e.sc.is_empty() && e.ss.is_empty()
    }

    pub fn scaled(&self, alpha: f64) -> Eigenfunction {
        let e = &self.expansion;
        Eigenfunction {
            expansion: Expansion {
                domain: e.domain.clone(),
                basis: e.basis,
                cc: e.cc.scaled(alpha),
                cs: e.cs.scaled(alpha),
                sc: e.sc.scaled(alpha),
                ss: e.ss.scaled(alpha),
            },
            mu: self.mu.clone(),
        }
    }

    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        evaluate(self, x, y)
    }

    fn with_cc(&self, cc: CoefficientVector) -> Eigenfunction {
        Eigenfunction { expansion: Expansion::neumann(self.domain().clone(), cc), mu: self.mu.clone() }
    }

    fn require_neumann(&self, what: &str) -> Result<()> {
        if self.basis() != Basis::NeumannCosine {
            return Err(Error::input(format!("{what} needs a Neumann cosine eigenfunction; drop the sine terms first")));
        }
        Ok(())
    }
}

pub fn evaluate(u: &Eigenfunction, x: f64, y: f64) -> Result<f64> {
    if !u.domain().contains(x, y) {
        return Err(Error::input(format!("point ({x}, {y}) lies outside the domain")));
    }
    Ok(u.expansion.value(x, y))
}

/// Restriction to one edge: `t ↦ Σ_k b_k cos(kπt/h)` on `[0, length]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTrace {
    pub edge: Edge,
    pub length: f64,
    pub half_period: f64,
    pub terms: BTreeMap<u64, f64>,
}

impl EdgeTrace {
    pub fn value(&self, t: f64) -> f64 {
        self.terms.iter().map(|(k, b)| b * cos_pi(*k as f64 * (t / self.half_period))).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Has a nonzero coefficient at frequency zero.
    pub fn has_constant_term(&self) -> bool {
        self.terms.contains_key(&0)
    }

    pub fn max_frequency(&self) -> u64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, b| acc.max(b.abs()))
    }

    /// `samples` uniform points, endpoints included, as `t,value` CSV.
    pub fn to_csv(&self, samples: usize) -> String {
        let samples = samples.max(2);
        let mut out = String::from("t,value\n");
        for j in 0..samples {
            let t = self.length * j as f64 / (samples - 1) as f64;
            let _ = writeln!(out, "{t},{}", self.value(t));
        }
        out
    }
}

pub fn trace(u: &Eigenfunction, edge: Edge) -> Result<EdgeTrace> {
    u.require_neumann("trace")?;
    let dom = u.domain();
    let span = dom.span();
    let mut terms: BTreeMap<u64, f64> = BTreeMap::new();
    for (md, a) in u.coeffs().iter() {
        let (k, factor) = match edge {
            Edge::Bottom => (md.m, 1.0),
            Edge::Top => (md.m, parity_sign(md.n * span)),
            Edge::Left => (md.n, 1.0),
            Edge::Right => (md.n, parity_sign(md.m * span)),
        };
        *terms.entry(k).or_insert(0.0) += a * factor;
    }
    terms.retain(|_, b| *b != 0.0);
    let axis = match edge {
        Edge::Bottom | Edge::Top => Axis::X,
        Edge::Left | Edge::Right => Axis::Y,
    };
    Ok(EdgeTrace { edge, length: dom.extent(axis), half_period: dom.half_period(axis), terms })
}

/// Average over the reflections about both midlines of `R(p,q)`:
/// modes with an odd index vanish, even-even modes are kept.
pub fn symmetrize(v: &Eigenfunction) -> Result<Eigenfunction> {
    v.require_neumann("symmetrize")?;
    if !matches!(v.domain(), Domain::Rect(RectangleClass::Rational { .. })) {
        return Err(Error::input("symmetrize needs a rational rectangle"));
    }
    Ok(v.with_cc(v.coeffs().filter(|md| md.m % 2 == 0 && md.n % 2 == 0)))
}

/// `a'_{m,n} = (a_{m,n} + a_{n,m})/2`, i.e. `(u(x,y) + u(y,x))/2`.
pub fn diagonal_symmetrize(u: &Eigenfunction) -> Result<Eigenfunction> {
    u.require_neumann("diagonal_symmetrize")?;
    if !u.domain().is_square() {
        return Err(Error::input("diagonal_symmetrize needs a square domain"));
    }
    let c = u.coeffs();
    let mut out = CoefficientVector::new();
    for md in c.modes().chain(c.modes().map(ModeIndex::swapped)) {
        if out.get(md) == 0.0 {
            out.add(md, 0.5 * (c.get(md) + c.get(md.swapped())));
        }
    }
    Ok(u.with_cc(out))
}

/// Result of carrying a symmetrized eigenfunction on `R(p,q)` to the `2π`-square.
#[derive(Clone, Debug)]
pub struct Lift {
    pub square: Eigenfunction,
    /// `m² + n²` for every mode of `square`.
    pub lam_q: BigInt,
    /// Side of the extended square, `lcm(p, q) = p·q`.
    pub side: u64,
    pub mode_map: Vec<(ModeIndex, ModeIndex)>,
}

/// Continue `w` evenly and periodically to `[0,L]²`, `L = lcm(p,q)`, and rescale to
/// `[0,2π]²`: mode `(m, n)` becomes `(mL/(2p), nL/(2q))`.
pub fn lift_to_square(w: &Eigenfunction) -> Result<Lift> {
    w.require_neumann("lift_to_square")?;
    let Domain::Rect(RectangleClass::Rational { p, q }) = *w.domain() else {
        return Err(Error::input("lift_to_square needs a rational rectangle"));
    };
    if w.is_zero() {
        return Err(Error::EmptyLift);
    }
    if let Some(md) = w.coeffs().modes().find(|md| md.m % 2 == 1 || md.n % 2 == 1) {
        return Err(Error::input(format!("lift_to_square needs even modes; found ({}, {})", md.m, md.n)));
    }
    let side = p.checked_mul(q).ok_or_else(|| Error::input("p·q overflows"))?;
    let mu = w.mu().exact().expect("rational rectangles have exact spectra");
    let quarter_l2 = Rational::new(BigInt::from(side) * side, 4).expect("nonzero");
    let lam_q = (mu * &quarter_l2)
        .to_integer()
        .ok_or_else(|| Error::InconsistentSpectrum(format!("μ·L²/4 is not an integer for μ = {mu}")))?;
    let mut mode_map = Vec::new();
    let mut pairs = Vec::new();
    for (md, a) in w.coeffs().iter() {
        let k = (md.m / 2).checked_mul(q).ok_or_else(|| Error::input("lifted index overflows"))?;
        let kp = (md.n / 2).checked_mul(p).ok_or_else(|| Error::input("lifted index overflows"))?;
        let image = ModeIndex::new(k, kp);
        mode_map.push((md, image));
        pairs.push((image, a));
    }
    let square = Eigenfunction::neumann(
        Domain::Square2Pi,
        SpectralParam::Exact(Rational::from_integer(lam_q.clone())),
        CoefficientVector::from_pairs(pairs)?,
    )?;
    Ok(Lift { square, lam_q, side, mode_map })
}

/// Project a torus or cylinder eigenfunction onto its cosine part.
pub fn drop_sines(u: &Eigenfunction) -> Result<Eigenfunction> {
    let expansion = u.expansion.drop_sines();
    Eigenfunction::new(expansion, u.mu.clone())
}

impl Eigenfunction {
    /// The index set of `mu` on the spectral rectangle, when exact.
    pub fn eigenspace_modes(&self) -> Result<crate::spectrum::ModeSet> {
        index_set(&self.domain().spectral_rect(), &self.mu)
    }
}

// JSON

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    m: u64,
    n: u64,
    a: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenfunctionRepr {
    rect: Domain,
    mu: SpectralParam,
    basis: Basis,
    coeffs: Vec<CoeffEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs_cs: Option<Vec<CoeffEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs_sc: Option<Vec<CoeffEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs_ss: Option<Vec<CoeffEntry>>,
}

fn to_entries(v: &CoefficientVector) -> Vec<CoeffEntry> {
    v.iter().map(|(md, a)| CoeffEntry { m: md.m, n: md.n, a }).collect()
}

fn from_entries(field: &str, v: Option<Vec<CoeffEntry>>) -> Result<CoefficientVector> {
    CoefficientVector::from_pairs(v.unwrap_or_default().into_iter().map(|e| (ModeIndex::new(e.m, e.n), e.a)))
        .map_err(|e| Error::input(format!("{field}: {e}")))
}

impl Serialize for Eigenfunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let e = &self.expansion;
        let (cs, sc, ss) = match e.basis {
            Basis::NeumannCosine => (None, None, None),
            Basis::CylinderMixed => (None, Some(to_entries(&e.sc)), None),
            Basis::TorusFull => (Some(to_entries(&e.cs)), Some(to_entries(&e.sc)), Some(to_entries(&e.ss))),
        };
        EigenfunctionRepr {
            rect: e.domain.clone(),
            mu: self.mu.clone(),
            basis: e.basis,
            coeffs: to_entries(&e.cc),
            coeffs_cs: cs,
            coeffs_sc: sc,
            coeffs_ss: ss,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Eigenfunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = EigenfunctionRepr::deserialize(deserializer)?;
        let build = || -> Result<Eigenfunction> {
            let expansion = Expansion {
                domain: r.rect,
                basis: r.basis,
                cc: from_entries("coeffs", Some(r.coeffs))?,
                cs: from_entries("coeffs_cs", r.coeffs_cs)?,
                sc: from_entries("coeffs_sc", r.coeffs_sc)?,
                ss: from_entries("coeffs_ss", r.coeffs_ss)?,
            };
            Eigenfunction::new(expansion, r.mu)
        };
        build().map_err(serde::de::Error::custom)
    }
}

impl Lift {
    pub fn lam_q_u64(&self) -> Option<u64> {
        self.lam_q.to_u64()
    }
}
