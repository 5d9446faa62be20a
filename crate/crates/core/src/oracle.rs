//! Independent numerical checks: dense boundary minimization, finite
//! difference residuals, seeded eigenspace sampling and the sweep drivers.
//!
//! Nothing here goes through [`crate::eigenfunction::trace`]; boundary values
//! are assembled directly from the separated terms of the expansion.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenfunction::{CoefficientVector, Eigenfunction, Expansion, Wave};
use crate::error::{Error, Result};
use crate::exact::{cmp_f64, Axis, BoundaryPoint, CaseTag, Domain, Edge, Rational};
use crate::spectrum::{enumerate, index_set, SpectralParam};
use crate::trig::{golden_section_min, PiTable};
use crate::twosquares::{check_representations, RepresentationTable, Violation};
use crate::witness::{certificate_values, verify_certificate, witness, CertKind};

/// Default uniform samples per edge.
pub const DEFAULT_SAMPLES: usize = 4096;
/// Default relative tolerance of the sweeps.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Varying and fixed coordinate of an edge.
fn edge_axes(edge: Edge) -> (Axis, Axis) {
    match edge {
        Edge::Bottom | Edge::Top => (Axis::X, Axis::Y),
        Edge::Left | Edge::Right => (Axis::Y, Axis::X),
    }
}

fn edge_fixed_coordinate(dom: &Domain, edge: Edge) -> f64 {
    match edge {
        Edge::Bottom | Edge::Left => 0.0,
        Edge::Top => dom.extent(Axis::Y),
        Edge::Right => dom.extent(Axis::X),
    }
}

/// One edge as a sum of waves in the running coordinate.
fn edge_waves(e: &Expansion, edge: Edge) -> Vec<(Wave, f64)> {
    let (run, _) = edge_axes(edge);
    let fixed = edge_fixed_coordinate(&e.domain, edge);
    let mut grouped: BTreeMap<(bool, u64), (Wave, f64)> = BTreeMap::new();
    for term in e.terms() {
        let (w_run, w_fixed) = if run == Axis::X { (term.x, term.y) } else { (term.y, term.x) };
        let b = term.a * w_fixed.value(fixed);
        grouped.entry((w_run.sine, w_run.index)).or_insert((w_run, 0.0)).1 += b;
    }
    grouped.into_values().filter(|(_, b)| *b != 0.0).collect()
}

fn wave_sum(waves: &[(Wave, f64)], t: f64) -> f64 {
    waves.iter().map(|(w, b)| b * w.value(t)).sum()
}

/// Minimum of `u` over uniform samples of the four edges (endpoints
/// included), refined by golden-section search around the sampled argmin.
pub fn boundary_min(u: &Eigenfunction, samples_per_edge: usize) -> Result<(f64, BoundaryPoint)> {
    expansion_boundary_min(u.expansion(), samples_per_edge)
}

/// [`boundary_min`] for an arbitrary trigonometric expansion.
pub fn expansion_boundary_min(e: &Expansion, samples_per_edge: usize) -> Result<(f64, BoundaryPoint)> {
    if samples_per_edge < 2 {
        return Err(Error::input("boundary_min needs at least 2 samples per edge"));
    }
    let table = PiTable::cached(samples_per_edge);
    let steps = (samples_per_edge - 1) as u64;
    let span = e.domain.span();
    let mut best = (f64::INFINITY, BoundaryPoint::new(Edge::Bottom, 0.0));
    for edge in Edge::ALL {
        let len = e.domain.edge_length(edge);
        let waves = edge_waves(e, edge);
        // t_j = len·j/steps and len/half_period = span
        let mut values = vec![0.0; samples_per_edge];
        for (w, b) in &waves {
            table.accumulate(w.index * span, w.sine, *b, &mut values);
        }
        let (j, v) = values
            .iter()
            .enumerate()
            .map(|(j, v)| (j as u64, *v))
            .min_by(|a, b| cmp_f64(a.1, b.1))
            .expect("at least two samples");
        let grid = |j: u64| len * j as f64 / steps as f64;
        let mut cand = (v, grid(j));
        if !waves.is_empty() {
            let (t, rv) = golden_section_min(
                |t| wave_sum(&waves, t),
                grid(j.saturating_sub(1)),
                grid((j + 1).min(steps)),
                120,
            );
            cand = cand.min_by_value((rv, t));
        }
        if cand.0 < best.0 {
            best = (cand.0, BoundaryPoint::new(edge, cand.1));
        }
    }
    Ok(best)
}

trait MinByValue {
    fn min_by_value(self, other: Self) -> Self;
}

impl MinByValue for (f64, f64) {
    fn min_by_value(self, other: Self) -> Self {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }
}

/// Maximum over the interior grid `(i·h, j·h)` of `|Δ_h u + λu|`, where
/// `Δ_h` is the five-point Laplacian.
pub fn pde_residual(u: &Eigenfunction, h: f64) -> Result<f64> {
    let dom = u.domain();
    let (c, d) = (dom.extent(Axis::X), dom.extent(Axis::Y));
    if h.is_nan() || h <= 0.0 || h > c.min(d) / 8.0 * (1.0 + 1e-12) {
        return Err(Error::input(format!("grid step {h} must lie in (0, min(c, d)/8]")));
    }
    let lam = u.lambda();
    let nx = interior_count(c, h);
    let ny = interior_count(d, h);
    let terms = u.expansion().terms();
    // samples at i·h for i in 0..=n+1 so every interior point has both neighbours
    let sample = |w: &Wave, n: usize| (0..n + 2).map(|i| w.value(i as f64 * h)).collect::<Vec<_>>();
    let cols: Vec<(f64, Vec<f64>, Vec<f64>)> =
        terms.iter().map(|t| (t.a, sample(&t.x, nx), sample(&t.y, ny))).collect();
    let inv_h2 = 1.0 / (h * h);
    let mut worst = 0.0f64;
    let mut row = vec![0.0; nx + 1];
    for j in 1..=ny {
        row.iter_mut().for_each(|r| *r = 0.0);
        for (a, xs, ys) in &cols {
            let y0 = ys[j];
            let dyy = (ys[j + 1] + ys[j - 1] - 2.0 * y0) * inv_h2;
            for i in 1..=nx {
                let x0 = xs[i];
                let dxx = (xs[i + 1] + xs[i - 1] - 2.0 * x0) * inv_h2;
                row[i] += a * (dxx * y0 + x0 * dyy + lam * x0 * y0);
            }
        }
        worst = row[1..].iter().fold(worst, |acc, r| acc.max(r.abs()));
    }
    Ok(worst)
}

/// Number of grid points `i·h` with `1 ≤ i` and `i·h < extent`.
fn interior_count(extent: f64, h: f64) -> usize {
    let n = (extent / h).round();
    if (n * h - extent).abs() <= 1e-9 * extent {
        n as usize - 1
    } else {
        (extent / h).floor() as usize
    }
}

/// Observed order `log2(r(h)/r(h/2))` of [`pde_residual`].
pub fn convergence_order(u: &Eigenfunction, h: f64) -> Result<f64> {
    let coarse = pde_residual(u, h)?;
    let fine = pde_residual(u, h / 2.0)?;
    Ok((coarse / fine).log2())
}

/// Largest outward normal derivative over dense samples of the boundary,
/// differentiating each separated term analytically.
pub fn neumann_residual(u: &Eigenfunction) -> f64 {
    expansion_neumann_residual(u.expansion(), 1024)
}

pub fn expansion_neumann_residual(e: &Expansion, samples_per_edge: usize) -> f64 {
    let n = samples_per_edge.max(2);
    let terms = e.terms();
    let mut worst = 0.0f64;
    for edge in Edge::ALL {
        let (run, _) = edge_axes(edge);
        let fixed = edge_fixed_coordinate(&e.domain, edge);
        let len = e.domain.edge_length(edge);
        for j in 0..n {
            let t = len * j as f64 / (n - 1) as f64;
            let dn: f64 = terms
                .iter()
                .map(|term| {
                    if run == Axis::X {
                        term.a * term.x.value(t) * term.y.derivative(fixed)
                    } else {
                        term.a * term.x.derivative(fixed) * term.y.value(t)
                    }
                })
                .sum();
            worst = worst.max(dn.abs());
        }
    }
    worst
}

/// Random element of the eigenspace: standard normal coefficients on the
/// sorted index set, scaled to unit max-norm.
pub fn random_eigenfunction(domain: impl Into<Domain>, mu: &SpectralParam, seed: u64) -> Result<Eigenfunction> {
    let domain = domain.into();
    let rect = domain.spectral_rect();
    let mu = mu.clone().coerce_for(&rect)?;
    if mu.is_zero() {
        return Eigenfunction::constant(domain, 1.0);
    }
    let set = index_set(&rect, &mu)?;
    if set.is_empty() {
        return Err(Error::input(format!("{mu} is not an eigenvalue: the index set is empty")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = set.modes.iter().map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = raw.iter().fold(0.0f64, |acc, a| acc.max(a.abs()));
    let scale = if norm > 0.0 { 1.0 / norm } else { 1.0 };
    let coeffs = CoefficientVector::from_pairs(set.modes.iter().zip(&raw).map(|(m, a)| (*m, a * scale)))?;
    Eigenfunction::neumann(domain, mu, coeffs)
}

/// Seed of trial `trial` of the `index`-th eigenvalue of a sweep.
pub fn trial_seed(seed: u64, index: usize, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((index as u64) << 32) | trial as u64);
    rng.next_u64()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub mu: SpectralParam,
    pub multiplicity: usize,
    /// Smallest `boundary_min/‖a‖∞` over the trials.
    pub worst_boundary_min: f64,
    pub certificate_verified: bool,
    /// The sampled minimum never exceeds the minimum at the certificate points.
    pub oracle_agrees: bool,
    /// Largest `identity_residual/‖a‖∞` of the square identities, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_identity_residual: Option<f64>,
    /// Every selected edge trace had no frequency-zero coefficient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_frequency_absent: Option<bool>,
    pub inconclusive: usize,
    pub kinds: BTreeMap<String, usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rect: Domain,
    pub mu_max: Rational,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub records: Vec<SweepRecord>,
    pub pass: bool,
}

/// One random sample of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub mu: f64,
    pub trial: usize,
    pub boundary_min: f64,
    pub certificate_min: Option<f64>,
}

struct TrialOutcome {
    sample: SampleRecord,
    verified: bool,
    agrees: bool,
    identity: Option<f64>,
    zero_frequency_absent: Option<bool>,
    inconclusive: bool,
    kind: Option<CertKind>,
}

fn run_trial(domain: &Domain, mu: &SpectralParam, seed: u64, trial: usize, tol: f64) -> Result<TrialOutcome> {
    let u = random_eigenfunction(domain.clone(), mu, seed)?;
    let norm = u.max_abs_coeff();
    let (bmin, _) = boundary_min(&u, DEFAULT_SAMPLES)?;
    let mut out = TrialOutcome {
        sample: SampleRecord { mu: mu.to_f64(), trial, boundary_min: bmin / norm, certificate_min: None },
        verified: false,
        agrees: false,
        identity: None,
        zero_frequency_absent: None,
        inconclusive: false,
        kind: None,
    };
    match witness(&u) {
        Ok(cert) => {
            let cmin = certificate_values(&u, &cert)?.into_iter().fold(f64::INFINITY, f64::min);
            out.sample.certificate_min = Some(cmin / norm);
            out.verified = verify_certificate(&u, &cert, tol)? && bmin <= tol * norm;
            out.agrees = bmin <= cmin + tol * norm;
            out.identity = cert.derivation.identity_residual.map(|r| r / norm);
            out.zero_frequency_absent = cert.derivation.zero_frequency_absent;
            out.kind = Some(cert.kind);
        }
        Err(Error::NumericalInconclusive { .. }) => out.inconclusive = true,
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn merge(mu: SpectralParam, multiplicity: usize, outcomes: Vec<TrialOutcome>) -> (SweepRecord, Vec<SampleRecord>) {
    let mut rec = SweepRecord {
        mu,
        multiplicity,
        worst_boundary_min: f64::NEG_INFINITY,
        certificate_verified: true,
        oracle_agrees: true,
        max_identity_residual: None,
        zero_frequency_absent: None,
        inconclusive: 0,
        kinds: BTreeMap::new(),
        pass: true,
    };
    let mut samples = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        rec.worst_boundary_min = rec.worst_boundary_min.max(o.sample.boundary_min);
        rec.certificate_verified &= o.verified;
        rec.oracle_agrees &= o.agrees;
        if let Some(r) = o.identity {
            rec.max_identity_residual = Some(rec.max_identity_residual.map_or(r, |m: f64| m.max(r)));
        }
        if let Some(z) = o.zero_frequency_absent {
            rec.zero_frequency_absent = Some(rec.zero_frequency_absent.unwrap_or(true) && z);
        }
        rec.inconclusive += o.inconclusive as usize;
        if let Some(k) = o.kind {
            let name = serde_json::to_value(k).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
            *rec.kinds.entry(name).or_default() += 1;
        }
        samples.push(o.sample);
    }
    rec.pass = rec.certificate_verified && rec.oracle_agrees && rec.inconclusive == 0 && rec.zero_frequency_absent != Some(false);
    (rec, samples)
}

/// Falsification run: `trials` random eigenfunctions for every eigenvalue
/// `0 < μ ≤ mu_max`, each required to have a boundary minimum `≤ tol·‖a‖∞`
/// and a verifying certificate.
pub fn theorem_sweep(domain: impl Into<Domain>, mu_max: &Rational, trials: usize, seed: u64) -> Result<SweepReport> {
    theorem_sweep_detailed(domain, mu_max, trials, seed, DEFAULT_TOL).map(|(r, _)| r)
}

/// [`theorem_sweep`] with the per-sample minima, in `(μ, trial)` order.
pub fn theorem_sweep_detailed(
    domain: impl Into<Domain>,
    mu_max: &Rational,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<(SweepReport, Vec<SampleRecord>)> {
    let domain = domain.into();
    if trials == 0 {
        return Err(Error::input("the sweep needs at least one trial per eigenvalue"));
    }
    if domain.classify() == CaseTag::C1 {
        return Err(Error::input(
            "the sweep needs an exactly enumerable spectrum; generic rectangles are checked mode by mode",
        ));
    }
    let rect = domain.spectral_rect();
    let spectrum: Vec<_> = enumerate(&rect, &SpectralParam::Exact(mu_max.clone()))?
        .into_iter()
        .filter(|(mu, _)| !mu.is_zero())
        .collect();
    let per_mu: Vec<(SweepRecord, Vec<SampleRecord>)> = spectrum
        .par_iter()
        .enumerate()
        .map(|(index, (mu, set))| {
            let outcomes = (0..trials)
                .map(|t| run_trial(&domain, mu, trial_seed(seed, index, t), t, tol))
                .collect::<Result<Vec<_>>>()?;
            Ok(merge(mu.clone(), set.len(), outcomes))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::with_capacity(per_mu.len());
    let mut samples = Vec::new();
    for (r, s) in per_mu {
        records.push(r);
        samples.extend(s);
    }
    let pass = records.iter().all(|r| r.pass);
    Ok((SweepReport { rect: domain, mu_max: mu_max.clone(), trials, seed, tol, records, pass }, samples))
}

/// CSV of per-sample minima.
pub fn samples_to_csv(samples: &[SampleRecord]) -> String {
    let mut out = String::from("mu,trial,boundary_min,certificate_min\n");
    for s in samples {
        let c = s.certificate_min.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", s.mu, s.trial, s.boundary_min, c));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropositionSweepReport {
    pub lam_max: u64,
    pub checked: u64,
    /// Values with at least one representation `m² + n²`, `m + n > 0`.
    pub with_representations: u64,
    pub representations: u64,
    /// Represented values of the form `4·(2ℓ+1)`.
    pub s_equals_one: u64,
    pub violations: Vec<(u64, Violation)>,
    pub pass: bool,
}

/// Check the two-square parity structure for every `λ ∈ [1, lam_max]`.
pub fn proposition_sweep(lam_max: u64) -> Result<PropositionSweepReport> {
    if lam_max == 0 {
        return Err(Error::input("proposition_sweep needs lam_max >= 1"));
    }
    let table = RepresentationTable::build(lam_max);
    let mut report = PropositionSweepReport {
        lam_max,
        checked: 0,
        with_representations: 0,
        representations: 0,
        s_equals_one: 0,
        violations: Vec::new(),
        pass: true,
    };
    for lam in 1..=lam_max {
        let reps = table.get(lam);
        let r = check_representations(lam, reps);
        report.checked += 1;
        if !reps.is_empty() {
            report.with_representations += 1;
            report.representations += reps.len() as u64;
            report.s_equals_one += r.s_equals_one as u64;
        }
        report.violations.extend(r.violations.into_iter().map(|v| (lam, v)));
    }
    report.pass = report.violations.is_empty();
    Ok(report)
}
