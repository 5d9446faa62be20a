//! Boundary non-positivity certificates for non-constant eigenfunctions.
//!
//! A certificate is a finite list of boundary points together with a
//! relation their values satisfy: either the values average to exactly zero
//! (so one of them is `≤ 0`), or their average is strictly negative. The
//! points are produced by following the three-case argument:
//!
//! * generic rectangles: a single mode `cos(mπx/c)cos(nπy/d)` takes the values
//!   `α` and `−α` at `x = 0` and `x = c/m` on the bottom edge;
//! * `c²/d²` rational but `c/d` irrational: one edge trace is a nonzero cosine
//!   polynomial without constant term, which must dip below zero;
//! * `c/d = p/q`: symmetrize, lift to the `2π`-square, symmetrize across the
//!   diagonal and read the value at `x* = 2^{−s}π` off the two-adic class of
//!   the lifted eigenvalue.

use std::f64::consts::PI;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::eigenfunction::{diagonal_symmetrize, drop_sines, lift_to_square, symmetrize, trace, Basis, EdgeTrace, Eigenfunction};
use crate::error::{Error, Result};
use crate::exact::{fold, Axis, BoundaryPoint, CaseTag, Domain, Edge, RectangleClass};
use crate::spectrum::index_set;
use crate::trig::{golden_section_min, PiTable};
use crate::twosquares::{decompose, Core, ParityClass};

/// Tolerance used when recording a sampled negative value: `≤ −NEGATIVE_TOL·‖a‖∞`.
pub const NEGATIVE_TOL: f64 = 1e-9;
/// Cap on the sample count of the trace minimization.
pub const MAX_SAMPLES: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertCase {
    C1,
    C2,
    C3,
    TorusReduced,
    CylinderReduced,
}

impl From<CaseTag> for CertCase {
    fn from(t: CaseTag) -> Self {
        match t {
            CaseTag::C1 => CertCase::C1,
            CaseTag::C2 => CertCase::C2,
            CaseTag::C3 => CertCase::C3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    ExactZero,
    SignPair,
    NegativePoint,
    CornerAverage,
}

/// What the values at the certificate points satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// The values average to zero (an identity, up to rounding).
    MeanZero,
    /// The values average to a strictly negative number.
    MeanNegative,
}

/// Two-adic data of the lifted eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionInfo {
    pub lam_q: String,
    pub s: u32,
    pub ell: String,
    pub core: Core,
    pub class: ParityClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftInfo {
    pub side: u64,
    pub mode_map: Vec<((u64, u64), (u64, u64))>,
}

/// Record of the case analysis behind a certificate.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub steps: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_from: Option<Basis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionInfo>,
    /// `x* = 2^{−s}π` on the square.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_star: Option<f64>,
    /// `|u_S(x*,0)|` (class J) or `|u_S(0,0) + u_S(x*,0)|` (class I).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_edge: Option<Edge>,
    /// The selected trace has no frequency-zero coefficient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_frequency_absent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_value: Option<f64>,
    /// `(t, value)` of the refined trace minimum near the sampled one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refined_min: Option<(f64, f64)>,
}

impl Derivation {
    fn step(&mut self, s: impl Into<String>) {
        self.steps.push(s.into());
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub case_tag: CertCase,
    pub kind: CertKind,
    pub relation: Relation,
    pub points: Vec<BoundaryPoint>,
    pub derivation: Derivation,
}

/// Certificate for any non-constant eigenfunction.
pub fn witness(u: &Eigenfunction) -> Result<WitnessCertificate> {
    if u.is_constant() {
        return Err(Error::ConstantEigenfunction);
    }
    match u.basis() {
        Basis::NeumannCosine => witness_neumann(u),
        basis @ (Basis::TorusFull | Basis::CylinderMixed) => {
            let reduced = drop_sines(u)?;
            let mut cert = if reduced.is_zero() {
                // every reflection average vanishes; any orbit will do
                let mut d = Derivation::default();
                d.step("cosine part is zero: the reflection average vanishes identically");
                let t = u.domain().edge_length(Edge::Bottom) / 2.0;
                WitnessCertificate {
                    case_tag: u.domain().classify().into(),
                    kind: CertKind::ExactZero,
                    relation: Relation::MeanZero,
                    points: vec![BoundaryPoint::new(Edge::Bottom, t)],
                    derivation: d,
                }
            } else {
                witness_neumann(&reduced)?
            };
            cert.case_tag = match basis {
                Basis::TorusFull => CertCase::TorusReduced,
                _ => CertCase::CylinderReduced,
            };
            cert.derivation.reduced_from = Some(basis);
            cert.derivation.step(format!(
                "sine terms dropped; points extended by the reflections in the periodic direction{}",
                if basis == Basis::TorusFull { "s" } else { "" }
            ));
            let (rx, ry) = u.expansion().periodic_reflections();
            cert.points = reflect_orbits(u.domain(), &cert.points, rx, ry)?;
            Ok(cert)
        }
    }
}

fn witness_neumann(u: &Eigenfunction) -> Result<WitnessCertificate> {
    if u.is_constant() {
        return Err(Error::ConstantEigenfunction);
    }
    match u.domain() {
        Domain::Square2Pi => witness_square(u),
        Domain::Rect(r) => match r {
            RectangleClass::Generic { .. } => witness_simple(u),
            RectangleClass::Quadratic { .. } => witness_quadratic(u),
            RectangleClass::Rational { .. } => witness_rational(u),
        },
    }
}

/// Each point followed by its images under the selected reflections.
fn reflect_orbits(dom: &Domain, points: &[BoundaryPoint], rx: bool, ry: bool) -> Result<Vec<BoundaryPoint>> {
    let (c, d) = (dom.extent(Axis::X), dom.extent(Axis::Y));
    let mut out = Vec::new();
    for bp in points {
        let (x, y) = dom.point(bp);
        let mut orbit = vec![(x, y)];
        if rx {
            orbit.push((c - x, y));
        }
        if ry {
            let n = orbit.len();
            for i in 0..n {
                orbit.push((orbit[i].0, d - orbit[i].1));
            }
        }
        for (x, y) in orbit {
            out.push(BoundaryPoint::at(x, y, c, d).ok_or_else(|| {
                Error::InconsistentSpectrum(format!("reflected point ({x}, {y}) left the boundary"))
            })?);
        }
    }
    Ok(out)
}

/// Single-mode eigenfunction: values `α` and `−α` at two boundary points.
pub fn witness_simple(u: &Eigenfunction) -> Result<WitnessCertificate> {
    if u.basis() != Basis::NeumannCosine {
        return Err(Error::input("witness_simple needs a Neumann cosine eigenfunction"));
    }
    let mut modes = u.coeffs().iter();
    let (mode, alpha) = match (modes.next(), modes.next()) {
        (Some(first), None) => first,
        (None, _) => return Err(Error::ConstantEigenfunction),
        _ => {
            return Err(Error::input(format!(
                "{} modes share one eigenvalue on a rectangle whose eigenvalues are all simple",
                u.coeffs().len()
            )))
        }
    };
    if mode.is_constant() {
        return Err(Error::ConstantEigenfunction);
    }
    let dom = u.domain();
    let (edge, t) = if mode.m > 0 {
        (Edge::Bottom, dom.half_period(Axis::X) / mode.m as f64)
    } else {
        (Edge::Left, dom.half_period(Axis::Y) / mode.n as f64)
    };
    let mut d = Derivation::default();
    d.step(format!(
        "single mode ({}, {}) with coefficient {alpha}: values {alpha} at t = 0 and {} at t = {t} on the {edge:?} edge",
        mode.m, mode.n, -alpha
    ));
    Ok(WitnessCertificate {
        case_tag: dom.classify().into(),
        kind: CertKind::SignPair,
        relation: Relation::MeanZero,
        points: vec![BoundaryPoint::new(edge, 0.0), BoundaryPoint::new(edge, t)],
        derivation: d,
    })
}

/// Irrational `c/d` with rational `c²/d²`: a mean-zero edge trace.
pub fn witness_quadratic(u: &Eigenfunction) -> Result<WitnessCertificate> {
    if !matches!(u.domain(), Domain::Rect(RectangleClass::Quadratic { .. })) {
        return Err(Error::input("witness_quadratic needs a quadratic rectangle"));
    }
    if u.is_constant() {
        return Err(Error::ConstantEigenfunction);
    }
    let rect = u.domain().spectral_rect();
    let set = index_set(&rect, u.mu())?;
    if set.has_x_axis_mode() && set.has_y_axis_mode() {
        return Err(Error::InconsistentSpectrum(format!(
            "I({}) contains both an (m,0) and a (0,n) mode",
            u.mu()
        )));
    }
    let edge = if set.has_y_axis_mode() { Edge::Left } else { Edge::Bottom };
    let tr = trace(u, edge)?;
    let mut d = Derivation {
        selected_edge: Some(edge),
        zero_frequency_absent: Some(!tr.has_constant_term()),
        ..Derivation::default()
    };
    d.step(format!(
        "I({}) has no {} mode, so the {edge:?} trace is orthogonal to constants",
        u.mu(),
        if edge == Edge::Bottom { "(0,n)" } else { "(m,0)" }
    ));
    if tr.has_constant_term() {
        return Err(Error::InconsistentSpectrum("selected trace has a constant term".into()));
    }
    if tr.is_zero() {
        d.step("the trace vanishes identically");
        return Ok(WitnessCertificate {
            case_tag: CertCase::C2,
            kind: CertKind::ExactZero,
            relation: Relation::MeanZero,
            points: vec![BoundaryPoint::new(edge, tr.length / 2.0)],
            derivation: d,
        });
    }
    let norm = u.max_abs_coeff();
    let found = negative_point(&tr, u.domain().span(), norm)?;
    let (t, value) = found.point;
    d.samples = Some(found.samples);
    d.witness_value = Some(value);
    d.refined_min = Some(found.refined);
    d.step(format!("mean-zero trace takes the value {value:e} at t = {t}"));
    if found.refined.0 != t {
        d.step(format!("local refinement: {:e} at t = {}", found.refined.1, found.refined.0));
    }
    Ok(WitnessCertificate {
        case_tag: CertCase::C2,
        kind: CertKind::NegativePoint,
        relation: Relation::MeanNegative,
        points: vec![BoundaryPoint::new(edge, t)],
        derivation: d,
    })
}

/// Outcome of the trace minimization.
struct TraceMinimum {
    /// Certificate point and the trace value there.
    point: (f64, f64),
    /// Golden-section refinement of the sampled minimum.
    refined: (f64, f64),
    samples: usize,
}

/// Minimum of a trace on `[0, length]`: uniform sampling plus golden-section
/// refinement, doubling the sample count until a value `≤ −NEGATIVE_TOL·norm` shows up.
///
/// The certificate point is the first grid point within `1e−12·norm` of the
/// sampled minimum when it already clears the threshold, so that it depends
/// on `u` only through discrete choices and survives positive rescaling.
fn negative_point(tr: &EdgeTrace, span: u64, norm: f64) -> Result<TraceMinimum> {
    let threshold = -NEGATIVE_TOL * norm;
    let mut n = 4096usize.max(32usize.saturating_mul(tr.max_frequency() as usize));
    let mut best = f64::INFINITY;
    while n <= MAX_SAMPLES {
        let table = PiTable::cached(n);
        let steps = (n - 1) as f64;
        let mut values = vec![0.0; n];
        for (k, b) in &tr.terms {
            table.accumulate(k * span, false, *b, &mut values);
        }
        let vmin = values.iter().copied().fold(f64::INFINITY, f64::min);
        let j = values.iter().position(|v| *v <= vmin + 1e-12 * norm).expect("n >= 2") as u64;
        let grid = |j: u64| tr.length * j as f64 / steps;
        let sampled = (grid(j), tr.value(grid(j)));
        let lo = grid(j.saturating_sub(1));
        let hi = grid((j + 1).min(n as u64 - 1));
        let refined = golden_section_min(|t| tr.value(t), lo, hi, 200);
        let refined = if refined.1 < sampled.1 { refined } else { sampled };
        let point = if sampled.1 <= threshold { sampled } else { refined };
        best = best.min(refined.1);
        if point.1 <= threshold {
            return Ok(TraceMinimum { point, refined, samples: n });
        }
        n *= 2;
    }
    Err(Error::NumericalInconclusive { samples: MAX_SAMPLES, best })
}

/// A point of the `2π`-square with `y = 0`, `x = π·r`.
#[derive(Clone, Copy, Debug)]
struct SquarePoint {
    r: f64,
}

struct SquareWitness {
    kind: CertKind,
    points: Vec<SquarePoint>,
}

/// Steps shared by rational rectangles and the square itself: diagonal
/// symmetrization and the two-adic choice of `x*`.
fn square_witness(u_q: &Eigenfunction, d: &mut Derivation) -> Result<SquareWitness> {
    let u_s = diagonal_symmetrize(u_q)?;
    let lam = u_q
        .mu()
        .exact()
        .and_then(|m| m.to_integer())
        .and_then(|m| m.to_biguint())
        .ok_or_else(|| Error::InconsistentSpectrum(format!("square eigenvalue {} is not an integer", u_q.mu())))?;
    let class = decompose(&lam)?;
    let parity = class.predicted();
    let r = (-(class.s as f64)).exp2();
    let x_star = PI * r;
    d.decomposition = Some(DecompositionInfo {
        lam_q: lam.to_string(),
        s: class.s,
        ell: class.ell.to_string(),
        core: class.core,
        class: parity,
    });
    d.x_star = Some(x_star);
    let value_at = |x: f64| u_s.evaluate(x, 0.0);
    let out = match parity {
        ParityClass::ClassJ => {
            let v = value_at(x_star)?;
            d.identity_residual = Some(v.abs());
            d.step(format!(
                "λ = {lam} = 4^{}·(2·{}+1): reduced representations have one odd coordinate, so u_S(x*, 0) = 0 at x* = {x_star}",
                class.s, class.ell
            ));
            if class.s == 1 {
                d.step("s = 1: x* = π/2");
            }
            SquareWitness { kind: CertKind::ExactZero, points: vec![SquarePoint { r }] }
        }
        ParityClass::ClassI => {
            let v0 = value_at(0.0)?;
            let v1 = value_at(x_star)?;
            d.identity_residual = Some((v0 + v1).abs());
            d.step(format!(
                "λ = {lam} = 2·4^{}·(2·{}+1): reduced representations are odd-odd, so u_S(0,0) + u_S(x*, 0) = 0 at x* = {x_star}",
                class.s, class.ell
            ));
            SquareWitness { kind: CertKind::SignPair, points: vec![SquarePoint { r: 0.0 }, SquarePoint { r }] }
        }
        ParityClass::Neither => unreachable!("predicted classes are I or J"),
    };
    d.step("u_S(x, y) = (u(x, y) + u(y, x))/2; each value is an average over the diagonal partners");
    Ok(out)
}

fn square_points(sq: &SquareWitness) -> Vec<(f64, f64)> {
    // square coordinates in units of π, with diagonal partners
    sq.points.iter().flat_map(|p| [(p.r, 0.0), (0.0, p.r)]).collect()
}

/// Eigenfunctions already on the `2π`-square.
fn witness_square(u: &Eigenfunction) -> Result<WitnessCertificate> {
    let mut d = Derivation::default();
    d.step("integer frequencies on the 2π-square: the midline reflections act trivially");
    let sq = square_witness(u, &mut d)?;
    let points = square_points(&sq)
        .into_iter()
        .map(|(rx, ry)| BoundaryPoint::at(PI * rx, PI * ry, 2.0 * PI, 2.0 * PI).expect("one coordinate is zero"))
        .collect();
    Ok(WitnessCertificate { case_tag: CertCase::C3, kind: sq.kind, relation: Relation::MeanZero, points, derivation: d })
}

/// Rational side ratio `p/q`.
pub fn witness_rational(v: &Eigenfunction) -> Result<WitnessCertificate> {
    let Domain::Rect(RectangleClass::Rational { p, q }) = *v.domain() else {
        return Err(Error::input("witness_rational needs a rational rectangle"));
    };
    if v.is_constant() {
        return Err(Error::ConstantEigenfunction);
    }
    let (pf, qf) = (p as f64, q as f64);
    let mut d = Derivation::default();
    let w = symmetrize(v)?;
    if w.is_zero() {
        d.step(
            "the four-fold reflection average vanishes (every mode has an odd index); \
             the corner values of v average to w(0,0) = 0",
        );
        return Ok(WitnessCertificate {
            case_tag: CertCase::C3,
            kind: CertKind::CornerAverage,
            relation: Relation::MeanZero,
            points: vec![
                BoundaryPoint::new(Edge::Bottom, 0.0),
                BoundaryPoint::new(Edge::Bottom, pf),
                BoundaryPoint::new(Edge::Top, 0.0),
                BoundaryPoint::new(Edge::Top, pf),
            ],
            derivation: d,
        });
    }
    d.step(format!("w = four-fold reflection average of v keeps {} even-even mode(s)", w.coeffs().len()));
    let lift = lift_to_square(&w)?;
    d.lift = Some(LiftInfo {
        side: lift.side,
        mode_map: lift.mode_map.iter().map(|(a, b)| ((a.m, a.n), (b.m, b.n))).collect(),
    });
    d.step(format!(
        "continued to the square of side L = {} and rescaled to side 2π: λ_Q = μ·L²/4 = {}",
        lift.side, lift.lam_q
    ));
    let sq = square_witness(&lift.square, &mut d)?;
    let l = lift.side as f64;
    let mut points = Vec::new();
    for (rx, ry) in square_points(&sq) {
        // x' = π·r on the square maps to x = L·r/2 before folding
        let x = fold(l * rx / 2.0, pf);
        let y = fold(l * ry / 2.0, qf);
        for (px, py) in [(x, y), (pf - x, y), (x, qf - y), (pf - x, qf - y)] {
            points.push(BoundaryPoint::at(px, py, pf, qf).ok_or_else(|| {
                Error::InconsistentSpectrum(format!("unfolded point ({px}, {py}) is not on the boundary"))
            })?);
        }
    }
    d.step("square points unfolded through the rescaling, the fold onto R(p,q) and the four reflections");
    Ok(WitnessCertificate { case_tag: CertCase::C3, kind: sq.kind, relation: Relation::MeanZero, points, derivation: d })
}

/// Values of `u` at the certificate points.
pub fn certificate_values(u: &Eigenfunction, cert: &WitnessCertificate) -> Result<Vec<f64>> {
    if cert.points.is_empty() {
        return Err(Error::input("certificate has no points"));
    }
    cert.points
        .iter()
        .map(|bp| {
            u.domain().check_boundary_point(bp)?;
            let (x, y) = u.domain().point(bp);
            u.evaluate(x, y)
        })
        .collect()
}

/// True iff the minimum over the certificate points is `≤ tol·(1 + ‖a‖∞)`.
pub fn verify_certificate(u: &Eigenfunction, cert: &WitnessCertificate, tol: f64) -> Result<bool> {
    let values = certificate_values(u, cert)?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min <= tol * (1.0 + u.max_abs_coeff()))
}

/// Re-check the stated relation rather than only the minimum.
pub fn check_relation(u: &Eigenfunction, cert: &WitnessCertificate, tol: f64) -> Result<bool> {
    let values = certificate_values(u, cert)?;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(match cert.relation {
        Relation::MeanZero => mean.abs() <= tol * (1.0 + u.max_abs_coeff()),
        Relation::MeanNegative => mean < 0.0,
    })
}

/// Lifted eigenvalue as a big integer, exposed for callers that inspect derivations.
pub fn lam_q_of(cert: &WitnessCertificate) -> Option<BigUint> {
    cert.derivation.decomposition.as_ref().and_then(|d| d.lam_q.parse().ok())
}
