//! The acceptance suite. Each criterion runs over every configured prime
//! and seed and collects failures instead of stopping at the first one.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wahl_core::canideal::{first_syzygies, normal_sections, quadric_generators, CanonicalPresentation};
use wahl_core::curvemodel::PlaneCurve;
use wahl_core::exactcore::{Elem, PrimeField};
use wahl_core::extender::{
    extend, random_ribbon, ribbon_basis, surface_equations, universal_equations, ExtensionData, RibbonVector,
    SecondOrderSolver,
};
use wahl_core::gaussmap::{mult_rank, wahl_corank};
use wahl_core::planeext::{admissible_cubic, cubics_through, surface_sample};

use crate::corpus::{self, CorpusEntry, CORPUS};
use crate::error::CliResult;

pub const CRITERIA: usize = 12;

#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    pub primes: Vec<PrimeField>,
    pub seeds: Vec<u64>,
}

impl AcceptanceConfig {
    /// Two independent primes and two seeds.
    pub fn full() -> Self {
        let a = PrimeField::random(0x0a11);
        let b = (0x0b22..)
            .map(PrimeField::random)
            .find(|b| *b != a)
            .expect("infinite range");
        Self {
            primes: vec![a, b],
            seeds: vec![1, 2],
        }
    }

    pub fn quick() -> Self {
        Self {
            primes: vec![PrimeField::random(0x0a11)],
            seeds: vec![1],
        }
    }

    fn runs(&self) -> impl Iterator<Item = (PrimeField, u64)> + '_ {
        self.primes
            .iter()
            .flat_map(move |&p| self.seeds.iter().map(move |&s| (p, s)))
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub details: Vec<String>,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionResult {
    fn new(id: usize, title: &'static str, limit_secs: u64) -> Self {
        Self {
            id,
            title,
            details: Vec::new(),
            failures: Vec::new(),
            elapsed: Duration::ZERO,
            limit: Duration::from_secs(limit_secs),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.elapsed <= self.limit
    }

    fn detail(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    fn fail(&mut self, s: impl Into<String>) {
        self.failures.push(s.into());
    }

    /// Records the error of a fallible step as a failure.
    fn check<T>(&mut self, what: &str, r: CliResult<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{what}: {e}"));
                None
            }
        }
    }

    /// Fails when one unit of work exceeded its own time budget.
    fn time_unit(&mut self, what: &str, started: Instant, limit_secs: u64) {
        let t = started.elapsed();
        if t > Duration::from_secs(limit_secs) {
            self.fail(format!("{what} took {:.1}s, limit {limit_secs}s", t.as_secs_f64()));
        }
    }

    /// One summary line: status, id, title, time and details.
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} [{}] {} ({:.1}s / {}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        );
        for d in &self.details {
            let _ = write!(s, "; {d}");
        }
        if self.elapsed > self.limit {
            let _ = write!(s, "; over time");
        }
        for f in &self.failures {
            let _ = write!(s, "; failure: {f}");
        }
        s
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "hyperelliptic corank 3g-2",
        2 => "trigonal corank g+5",
        3 => "tetragonal corank 9",
        4 => "smooth plane septic corank 10",
        5 => "nodal octics corank >= 10-a",
        6 => "dim N(-1) = g + corank",
        7 => "N(-2) = 0",
        8 => "Sym^2 H^0(omega) -> H^0(omega^2) surjective",
        9 => "extension certificates",
        10 => "universal extension specializes",
        11 => "plane extension through cubics",
        12 => "corank >= 10-a spot check",
        _ => "unknown",
    }
}

/// Runs criterion `id` (1-based).
pub fn run(id: usize, cfg: &AcceptanceConfig) -> CriterionResult {
    let start = Instant::now();
    let mut r = match id {
        1 => hyperelliptic(cfg),
        2 => trigonal(cfg),
        3 => tetragonal(cfg),
        4 => smooth_plane(cfg),
        5 => nodal_octics(cfg),
        6 => normal_minus_one(cfg),
        7 => normal_minus_two(cfg),
        8 => surjectivity(cfg),
        9 => certificates(cfg),
        10 => universal(cfg),
        11 => plane_extension(cfg),
        12 => spot_check(cfg),
        _ => {
            let mut r = CriterionResult::new(id, "unknown", 0);
            r.fail(format!("no criterion {id}"));
            r
        }
    };
    r.elapsed = start.elapsed();
    r
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run(id, cfg)).collect()
}

fn entry(name: &str) -> &'static CorpusEntry {
    corpus::lookup(name).unwrap_or_else(|| panic!("corpus entry {name} missing"))
}

fn corank(c: &PlaneCurve, seed: u64) -> CliResult<usize> {
    Ok(wahl_corank(c, seed, None)?.corank)
}

fn presentation(c: &PlaneCurve, seed: u64) -> CliResult<CanonicalPresentation> {
    Ok(first_syzygies(quadric_generators(c, seed, None)?, seed)?)
}

fn tag(c: &PlaneCurve, seed: u64) -> String {
    format!("{} p={} seed={seed}", c.name(), c.field().modulus())
}

/// Wahl corank of a corpus curve over every run, checked against `ok`.
/// Returns the distinct values seen.
fn corank_runs(
    r: &mut CriterionResult,
    cfg: &AcceptanceConfig,
    e: &CorpusEntry,
    expect: &str,
    ok: impl Fn(usize) -> bool,
    unit_limit: u64,
) -> Vec<usize> {
    let started = Instant::now();
    let mut seen = Vec::new();
    for (p, s) in cfg.runs() {
        let Some(c) = r.check(e.name, e.curve(p)) else { continue };
        let Some(k) = r.check(&tag(&c, s), corank(&c, s)) else {
            continue;
        };
        if !ok(k) {
            r.fail(format!("{}: corank {k}, expected {expect}", tag(&c, s)));
        }
        if !seen.contains(&k) {
            seen.push(k);
        }
    }
    r.time_unit(e.name, started, unit_limit);
    let vals: Vec<String> = seen.iter().map(usize::to_string).collect();
    r.detail(format!("{} g={} corank={}", e.name, e.genus(), vals.join("/")));
    seen
}

fn hyperelliptic(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(1, title(1), 10);
    for name in ["hyperell-5-3", "hyperell-6-4"] {
        let e = entry(name);
        let want = 3 * e.genus() - 2;
        corank_runs(&mut r, cfg, e, &want.to_string(), |k| k == want, 5);
    }
    r
}

fn trigonal(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(2, title(2), 10);
    let e = entry("trigonal-6-3");
    let want = e.genus() + 5;
    corank_runs(&mut r, cfg, e, &want.to_string(), |k| k == want, 10);
    r
}

/// Tries the corpus member and then up to five resampled members; each run
/// needs one member with corank 9. Misses are reported either way.
fn tetragonal(cfg: &AcceptanceConfig) -> CriterionResult {
    const RESAMPLES: u64 = 5;
    let mut r = CriterionResult::new(3, title(3), 30);
    let e = entry("tetragonal-6-node");
    for (p, s) in cfg.runs() {
        let mut misses = Vec::new();
        let mut hit = None;
        for k in 0..=RESAMPLES {
            let Some(c) = r.check(e.name, e.curve_with_seed(p, e.seed + k)) else {
                continue;
            };
            let Some(cork) = r.check(&tag(&c, s), corank(&c, s)) else {
                continue;
            };
            if cork == 9 {
                hit = Some(k);
                break;
            }
            misses.push(format!("member {k}: {cork}"));
        }
        let where_ = format!("p={} seed={s}", p.modulus());
        match hit {
            Some(k) => r.detail(format!("{where_}: corank 9 at member {k}")),
            None => r.fail(format!("{where_}: no member with corank 9")),
        }
        if !misses.is_empty() {
            r.detail(format!("{where_} misses [{}]", misses.join(", ")));
        }
    }
    r
}

fn smooth_plane(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(4, title(4), 60);
    corank_runs(&mut r, cfg, entry("smooth-plane-7"), "10", |k| k == 10, 60);
    r
}

fn nodal_octics(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(5, title(5), 240);
    corank_runs(&mut r, cfg, entry("nodal-8-1"), ">= 9", |k| k >= 9, 120);
    corank_runs(&mut r, cfg, entry("nodal-8-2"), ">= 8", |k| k >= 8, 120);
    r
}

fn normal_minus_one(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(6, title(6), 180);
    for (name, pinned) in [("smooth-plane-7", Some(25)), ("nodal-8-1", None)] {
        let e = entry(name);
        let mut dims = Vec::new();
        for (p, s) in cfg.runs() {
            let Some(c) = r.check(name, e.curve(p)) else { continue };
            let t = tag(&c, s);
            let Some(cork) = r.check(&t, corank(&c, s)) else {
                continue;
            };
            let Some(pres) = r.check(&t, presentation(&c, s)) else {
                continue;
            };
            let Some(n) = r.check(&t, normal_sections(&pres, 1, s).map_err(Into::into)) else {
                continue;
            };
            let g = c.genus();
            if n.dim != g + cork {
                r.fail(format!("{t}: dim N(-1) = {}, g + corank = {}", n.dim, g + cork));
            }
            if let Some(want) = pinned.filter(|&w| w != n.dim) {
                r.fail(format!("{t}: dim N(-1) = {}, expected {want}", n.dim));
            }
            if !dims.contains(&n.dim) {
                dims.push(n.dim);
            }
        }
        let vals: Vec<String> = dims.iter().map(usize::to_string).collect();
        r.detail(format!("{name} dim N(-1)={}", vals.join("/")));
    }
    r
}

fn normal_minus_two(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(7, title(7), 60);
    for name in ["smooth-plane-7", "nodal-8-1"] {
        let e = entry(name);
        let mut dims = Vec::new();
        for (p, s) in cfg.runs() {
            let Some(c) = r.check(name, e.curve(p)) else { continue };
            let t = tag(&c, s);
            let Some(pres) = r.check(&t, presentation(&c, s)) else {
                continue;
            };
            let Some(n) = r.check(&t, normal_sections(&pres, 2, s).map_err(Into::into)) else {
                continue;
            };
            if n.dim != 0 {
                r.fail(format!("{t}: dim N(-2) = {}", n.dim));
            }
            if !dims.contains(&n.dim) {
                dims.push(n.dim);
            }
        }
        let vals: Vec<String> = dims.iter().map(usize::to_string).collect();
        r.detail(format!("{name} dim N(-2)={}", vals.join("/")));
    }
    r
}

fn surjectivity(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(8, title(8), 30);
    let mut checked = 0;
    for e in CORPUS.iter().filter(|e| e.genus() >= 2) {
        for (p, s) in cfg.runs() {
            let Some(c) = r.check(e.name, e.curve(p)) else { continue };
            let t = tag(&c, s);
            let Some(m) = r.check(&t, mult_rank(&c, 1, s, None).map_err(Into::into)) else {
                continue;
            };
            checked += 1;
            if m.corank != 0 {
                r.fail(format!("{t}: corank {} (g={}, {})", m.corank, c.genus(), c.gonality()));
            }
        }
    }
    r.detail(format!(
        "{checked} runs over {} curves",
        CORPUS.iter().filter(|e| e.genus() >= 2).count()
    ));
    r
}

fn scaled(f: PrimeField, v: &[Elem], c: Elem) -> Vec<Elem> {
    v.iter().map(|&x| f.mul(x, c)).collect()
}

fn sum(f: PrimeField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

fn diff(f: PrimeField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

fn ribbon(f_v: Vec<Elem>) -> RibbonVector {
    RibbonVector { f_v, normalized: false }
}

/// `h_{u+v} - h_u - h_v`.
fn polar(f: PrimeField, h: &dyn Fn(&[Elem]) -> CliResult<Vec<Elem>>, u: &[Elem], v: &[Elem]) -> CliResult<Vec<Elem>> {
    let huv = h(&sum(f, u, v))?;
    Ok(diff(f, &diff(f, &huv, &h(u)?), &h(v)?))
}

fn certificates(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(9, title(9), 300);
    let e = entry("smooth-plane-7");
    let mut ribbons = 0;
    for (p, s) in cfg.runs() {
        let Some(c) = r.check(e.name, e.curve(p)) else { continue };
        let t = tag(&c, s);
        let f = c.field();
        let Some(pres) = r.check(&t, presentation(&c, s)) else {
            continue;
        };
        let Some(basis) = r.check(&t, ribbon_basis(&pres, s).map_err(Into::into)) else {
            continue;
        };
        // a full-rank solver is the uniqueness statement for h
        let Some(solver) = r.check(&t, SecondOrderSolver::new(&pres).map_err(Into::into)) else {
            continue;
        };
        let h = |v: &[Elem]| -> CliResult<Vec<Elem>> {
            Ok(ExtensionData::compute_with(&solver, &pres, &ribbon(v.to_vec()))?.h_v)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0xce27);
        for i in 0..3 {
            let v = random_ribbon(&pres, &basis, s * 16 + i);
            let Some(data) = r.check(&t, ExtensionData::compute_with(&solver, &pres, &v).map_err(Into::into)) else {
                continue;
            };
            if r.check(&t, surface_equations(&pres, &data).map_err(Into::into))
                .is_none()
            {
                continue;
            }
            ribbons += 1;
            for _ in 0..3 {
                let lambda = f.random_nonzero(&mut rng);
                let Some(hl) = r.check(&t, h(&scaled(f, &v.f_v, lambda))) else {
                    continue;
                };
                if hl != scaled(f, &data.h_v, f.mul(lambda, lambda)) {
                    r.fail(format!("{t}: h(lambda v) != lambda^2 h(v) for lambda={lambda}"));
                }
            }
        }
        for i in 0..3 {
            let u = random_ribbon(&pres, &basis, s * 16 + 8 + i).f_v;
            let v = random_ribbon(&pres, &basis, s * 16 + 12 + i).f_v;
            let w = random_ribbon(&pres, &basis, s * 16 + 4 + i).f_v;
            let lambda = f.random_nonzero(&mut rng);
            let checks = (|| -> CliResult<[bool; 3]> {
                let b_uv = polar(f, &h, &u, &v)?;
                let symmetric = b_uv == polar(f, &h, &v, &u)?;
                let homogeneous = polar(f, &h, &scaled(f, &u, lambda), &v)? == scaled(f, &b_uv, lambda);
                let additive = polar(f, &h, &sum(f, &u, &w), &v)? == sum(f, &b_uv, &polar(f, &h, &w, &v)?);
                Ok([symmetric, homogeneous, additive])
            })();
            let Some([sym, hom, add]) = r.check(&t, checks) else {
                continue;
            };
            if !(sym && hom && add) {
                r.fail(format!(
                    "{t}: pair {i}: symmetric={sym} homogeneous={hom} additive={add}"
                ));
            }
        }
    }
    r.detail(format!("{ribbons} ribbons certified, 3 scalings each, 3 pairs per run"));
    r
}

fn universal(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(10, title(10), 600);
    let e = entry("smooth-plane-7");
    for (p, s) in cfg.runs() {
        let Some(c) = r.check(e.name, e.curve(p)) else { continue };
        let t = tag(&c, s);
        let f = c.field();
        let Some(pres) = r.check(&t, presentation(&c, s)) else {
            continue;
        };
        let Some(basis) = r.check(&t, ribbon_basis(&pres, s).map_err(Into::into)) else {
            continue;
        };
        let Some(u) = r.check(&t, universal_equations(&pres, &basis).map_err(Into::into)) else {
            continue;
        };
        let n = basis.len();
        if n != 10 {
            r.fail(format!("{t}: {n} ribbon directions, expected 10"));
        }
        if u.nvars() != c.genus() + n {
            r.fail(format!("{t}: {} variables, expected g + {n}", u.nvars()));
        }
        let mut directions: Vec<Vec<Elem>> = (0..n).map(|a| (0..n).map(|b| Elem::from(a == b)).collect()).collect();
        directions.push((0..n).map(|b| Elem::from(b < 2)).collect());
        let mut matched = 0;
        for dir in &directions {
            let mut v = vec![0; pres.m() * pres.g()];
            for (coef, b) in dir.iter().zip(&basis) {
                f.add_mul_assign(&mut v, &b.f_v, *coef);
            }
            let Some((_, surf)) = r.check(&t, extend(&pres, &ribbon(v)).map_err(Into::into)) else {
                continue;
            };
            if u.specialize(dir) == surf.equations {
                matched += 1;
            } else {
                r.fail(format!("{t}: specialization along {dir:?} differs"));
            }
        }
        r.detail(format!(
            "p={} seed={s}: {} variables, {matched}/{} directions match",
            p.modulus(),
            u.nvars(),
            directions.len()
        ));
    }
    r
}

fn plane_extension(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(11, title(11), 120);
    let e = entry("smooth-plane-7");
    for (p, s) in cfg.runs() {
        let Some(c) = r.check(e.name, e.curve(p)) else { continue };
        let t = tag(&c, s);
        let g = c.genus();
        for i in 0..3 {
            let Some((_, sys, _)) = r.check(&t, admissible_cubic(&c, s * 16 + i, 20).map_err(Into::into)) else {
                continue;
            };
            if sys.dim() != g + 1 {
                r.fail(format!("{t}: cubic {i}: dimension {}, expected {}", sys.dim(), g + 1));
            }
            let Some(sample) = r.check(&t, surface_sample(&sys, 2 * g + 10, s).map_err(Into::into)) else {
                continue;
            };
            if sample.cubic_rank != 1 || sample.curve_span != g {
                r.fail(format!(
                    "{t}: cubic {i}: cubic rank {}, curve span {}",
                    sample.cubic_rank, sample.curve_span
                ));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0xc0b1c);
        for a in [0usize, 1, 9] {
            let pts: Vec<[Elem; 2]> = (0..a)
                .map(|_| [rng.gen_range(0..p.modulus()), rng.gen_range(0..p.modulus())])
                .collect();
            match cubics_through(p, &pts) {
                Ok(b) if b.len() == 10 - a => {}
                Ok(b) => r.fail(format!("p={}: {} cubics through {a} points", p.modulus(), b.len())),
                Err(err) => r.fail(format!("p={}: cubics through {a} points: {err}", p.modulus())),
            }
        }
    }
    r.detail(format!("3 cubics per run, dim {}", entry("smooth-plane-7").genus() + 1));
    r
}

fn spot_check(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut r = CriterionResult::new(12, title(12), 300);
    for name in ["smooth-plane-7", "nodal-8-1", "nodal-8-2", "nodal-7-3"] {
        let e = entry(name);
        let bound = 10 - e.a();
        corank_runs(&mut r, cfg, e, &format!(">= {bound}"), |k| k >= bound, 300);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_independent() {
        let c = AcceptanceConfig::full();
        assert_eq!(c.primes.len(), 2);
        assert_ne!(c.primes[0], c.primes[1]);
        assert_eq!(c.runs().count(), 4);
    }

    #[test]
    fn line_format() {
        let mut r = CriterionResult::new(4, title(4), 60);
        r.detail("x");
        assert!(r.line().starts_with("PASS [4] smooth plane septic corank 10"));
        r.fail("y");
        assert!(r.line().starts_with("FAIL [4]"));
        assert!(r.line().ends_with("failure: y"));
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run(13, &AcceptanceConfig::quick()).passed());
    }
}
