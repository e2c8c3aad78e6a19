//! The checks behind the Kunneth comparison for one pair of summands,
//! collected into a serializable report.

use super::{ConnectedSum, ConnectedSumError, Eta, EtaRule, StateClass};
use crate::algebra::{Bigrading, BigradedUModule, GenId, ModuleElement};
use crate::complex::{ChainMap, FreeComplex, GridComplex, VarMap};
use crate::homology::{
    acyclicity_failures, quasi_iso_failures, reduced_cone_homology, reduced_homology, HomologyEngine, HomologyError, LevelComplex,
    Window,
};
use crate::state::{Gradings, State};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coverage {
    Exhaustive,
    /// Every slice of a finite window of Alexander levels.
    Window,
    /// A random subset; a pass here is a sampled pass only.
    Sampled { covered: usize, total: usize },
    Skipped { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub coverage: Coverage,
    pub passed: bool,
    /// Alexander levels (and Maslov range, if restricted) examined.
    pub window: Option<Window>,
    pub slices: usize,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub summand_size: usize,
    pub size: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || matches!(c.coverage, Coverage::Skipped { .. }))
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Homology of `GC^-(g#)`, of its quotient by `C` and of `C` itself is
    /// computed only up to this size of `g#`.
    pub full_max_size: usize,
    /// Number of Alexander levels below the top examined by per-level checks.
    pub depth: u32,
    pub window: Option<Window>,
    /// Check only this many `f` slices, chosen with `seed`.
    pub f_samples: Option<usize>,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { full_max_size: 6, depth: 3, window: None, f_samples: None, seed: 0 }
    }
}

/// Nonzero homology of `GC^-(g#)/C`, per level and with all variables zero.
#[derive(Clone, Debug, Serialize)]
pub struct AcyclicityReport {
    pub window: Window,
    pub failures: Vec<(Bigrading, usize)>,
    /// `None` when a window restricted the check.
    pub reduced: Option<Vec<(Bigrading, usize)>>,
}

impl AcyclicityReport {
    pub fn acyclic(&self) -> bool {
        self.failures.is_empty() && self.reduced.as_ref().is_none_or(|r| r.is_empty())
    }
}

fn level_window(c: &FreeComplex, window: Option<&Window>, depth: u32) -> Result<Window, HomologyError> {
    if let Some(w) = window {
        return Ok(*w);
    }
    let top = c.a_max().ok_or(HomologyError::Empty)?;
    let a_lo = top - depth as i32;
    let ms: Vec<i32> = (a_lo..=top).flat_map(|a| c.maslov_range(a)).collect();
    let (m_lo, m_hi) = (ms.iter().copied().min().unwrap_or(0), ms.iter().copied().max().unwrap_or(0));
    Ok(Window { m_lo: m_lo - 1, m_hi: m_hi + 1, a_lo, a_hi: top })
}

impl ConnectedSum {
    /// Whether `GC^-(g#)/C` has vanishing homology: per Alexander level in
    /// the window, and, without a window, exactly in every bigrading.
    pub fn quotient_acyclicity_check(&self, window: Option<&Window>, depth: u32) -> Result<AcyclicityReport, ConnectedSumError> {
        let q = self.quotient()?;
        let w = level_window(&q.complex, window, depth)?;
        let failures = acyclicity_failures(&q.complex, w.levels()).into_iter().filter(|(b, _)| w.contains(*b)).collect();
        let reduced = window.is_none().then(|| reduced_homology(&q.complex).into_iter().collect());
        Ok(AcyclicityReport { window: w, failures, reduced })
    }

    /// The inclusion `C -> GC^-(g#)` with its target.
    pub fn inclusion(&self, c: &super::CComplex) -> Result<(GridComplex, ChainMap), ConnectedSumError> {
        let full = GridComplex::build(&self.gsharp)?;
        let images = c.grid.states.iter().map(|x| ModuleElement::generator(full.id(x).expect("state of g#"))).collect();
        Ok((full, ChainMap::new(VarMap::identity(), Bigrading::new(0, 0), images)))
    }

    /// Bigradings where the inclusion of `C` fails to be an isomorphism on
    /// homology: per level in the window, and exactly without a window.
    pub fn inclusion_quasi_iso_check(&self, window: Option<&Window>, depth: u32) -> Result<AcyclicityReport, ConnectedSumError> {
        let c = self.build_c()?;
        let (full, inc) = self.inclusion(&c)?;
        let w = level_window(c.complex(), window, depth)?;
        let failures = quasi_iso_failures(&inc, c.complex(), &full.complex, w.levels())?.into_iter().filter(|(b, _)| w.contains(*b)).collect();
        let reduced = match window {
            Some(_) => None,
            None => Some(reduced_cone_homology(&inc, c.complex(), &full.complex)?.into_iter().collect()),
        };
        Ok(AcyclicityReport { window: w, failures, reduced })
    }
}

/// `c` with every grading shifted by `by`.
pub fn shifted(c: &FreeComplex, by: Bigrading) -> FreeComplex {
    let gradings = c.gradings().iter().map(|&g| g + by).collect();
    FreeComplex::new(c.vars().to_vec(), gradings, (0..c.len() as GenId).map(|g| c.d(g).clone()).collect())
}

/// Bigradings in the window where the homology of `c` differs in dimension
/// from `m`: `(bigrading, dim H(c), dim m)`.
pub fn module_dim_mismatches(c: &FreeComplex, m: &BigradedUModule, w: &Window) -> Vec<(Bigrading, usize, usize)> {
    let per: Vec<Vec<(Bigrading, usize, usize)>> = w
        .levels()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&a| {
            let h = LevelComplex::of(c, a).homology_dims();
            (w.m_lo..=w.m_hi)
                .filter_map(|mm| {
                    let b = Bigrading::new(mm, a);
                    let (x, y) = (h.get(&mm).copied().unwrap_or(0), m.dim_at(b));
                    (x != y).then_some((b, x, y))
                })
                .collect()
        })
        .collect();
    per.into_iter().flatten().collect()
}

fn module_of(d: &crate::grid::GridDiagram) -> Result<BigradedUModule, ConnectedSumError> {
    let gc = GridComplex::build(d)?;
    Ok(crate::homology::module_structure_auto(&gc.complex)?.module)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u128) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_millis())
}

fn skipped(name: &'static str, size: usize) -> Check {
    Check {
        name,
        coverage: Coverage::Skipped { reason: format!("not computed for g# of size {size}") },
        passed: false,
        window: None,
        slices: 0,
        detail: String::new(),
        millis: 0,
    }
}

fn check(name: &'static str, coverage: Coverage, passed: bool, detail: String, millis: u128) -> Check {
    Check { name, coverage, passed, window: None, slices: 0, detail, millis }
}

fn acyclicity_check(name: &'static str, r: AcyclicityReport, millis: u128) -> Check {
    let total: usize = r.reduced.as_ref().map_or(0, |v| v.iter().map(|x| x.1).sum());
    let detail = format!(
        "{} bigradings with homology in the window; total dimension with U = 0: {}",
        r.failures.len(),
        r.reduced.as_ref().map_or("not computed".to_string(), |_| total.to_string())
    );
    let coverage = if r.reduced.is_some() { Coverage::Exhaustive } else { Coverage::Window };
    Check { name, coverage, passed: r.acyclic(), window: Some(r.window), slices: r.window.levels().count(), detail, millis }
}

/// Runs every chain-level check at any size and the homology-level checks
/// up to `opts.full_max_size`.
pub fn verify_kunneth(g1: &crate::grid::GridDiagram, g2: &crate::grid::GridDiagram, opts: &VerifyOptions) -> Result<VerifyReport, ConnectedSumError> {
    let sum = ConnectedSum::new(g1, g2)?;
    let size = sum.gsharp.n();
    let small = size <= opts.full_max_size;
    let mut checks = Vec::new();

    let (bad, ms) = timed(|| sum.c_closure_failures());
    checks.push(check("c_closure", Coverage::Exhaustive, bad.is_empty(), format!("{} generators leave C", bad.len()), ms));

    let (fchecks, ms) = timed(|| {
        let f = sum.f_map();
        let mut slices = f.slices(opts.depth);
        let total = slices.len();
        if let Some(k) = opts.f_samples.filter(|&k| k < total) {
            slices.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed));
            slices.truncate(k);
            slices.sort_unstable();
        }
        let res: Vec<_> = slices.par_iter().map(|&(m, a)| f.check_slice(m, a)).collect();
        (res, total)
    });
    let (res, total) = fchecks;
    let coverage = if res.len() < total { Coverage::Sampled { covered: res.len(), total } } else { Coverage::Window };
    let w = res.iter().fold(None::<Window>, |acc, s| {
        let b = s.at;
        Some(match acc {
            None => Window { m_lo: b.maslov, m_hi: b.maslov, a_lo: b.alexander, a_hi: b.alexander },
            Some(w) => Window {
                m_lo: w.m_lo.min(b.maslov),
                m_hi: w.m_hi.max(b.maslov),
                a_lo: w.a_lo.min(b.alexander),
                a_hi: w.a_hi.max(b.alexander),
            },
        })
    });
    let inj = res.iter().filter(|s| !s.injective()).count();
    let img = res.iter().filter(|s| !s.image_matches()).count();
    let total_ad: usize = res.iter().map(|s| s.ad_dim).sum();
    checks.push(Check {
        name: "f_injective",
        coverage: coverage.clone(),
        passed: inj == 0,
        window: w,
        slices: res.len(),
        detail: format!("{inj} slices with a kernel; {total_ad} AD basis elements"),
        millis: ms,
    });
    checks.push(Check {
        name: "f_image",
        coverage,
        passed: img == 0,
        window: w,
        slices: res.len(),
        detail: format!("{img} slices where Im f differs from (U_n + U_n+1) II"),
        millis: 0,
    });

    let (eta, ms) = timed(|| Eta::new(&sum, EtaRule::Corrected));
    let eta = eta?;
    let states = sum.c_states();
    let (bad, ms2) = timed(|| eta.streaming_failures(&sum, &states));
    checks.push(check("eta_chain_map", Coverage::Exhaustive, bad.is_empty(), format!("{} of {} generators fail", bad.len(), states.len()), ms + ms2));

    let (homog, ms) = timed(|| eta_homogeneity(&sum, &eta, &states));
    let offset = homog.0;
    checks.push(check(
        "eta_homogeneous",
        Coverage::Exhaustive,
        homog.1 == 0 && offset.is_some(),
        format!("{} inhomogeneous images; target shift {}", homog.1, offset.map_or("undetermined".to_string(), |o| o.to_string())),
        ms,
    ));

    let (mods, ms) = timed(|| -> Result<_, ConnectedSumError> {
        let m1 = module_of(&sum.g1)?;
        let m2 = module_of(&sum.g2)?;
        let expected = m1.tensor_and_tor(&m2)?;
        let t = crate::homology::module_structure_auto(&eta.target)?;
        Ok((m1, m2, expected, t))
    });
    let (m1, m2, expected, t_res) = mods?;
    checks.push(check(
        "kunneth_tensor",
        Coverage::Exhaustive,
        t_res.module == expected,
        format!("H(T) = {}; tensor_and_tor = {}", t_res.module, expected),
        ms,
    ));
    let tau_sum = -m1.tower()?.alexander - m2.tower()?.alexander;
    checks.push(check(
        "tau_additive_tensor",
        Coverage::Exhaustive,
        t_res.tau() == tau_sum,
        format!("tau(T) = {}; tau(g1) + tau(g2) = {}", t_res.tau(), tau_sum),
        0,
    ));

    if !small {
        for name in ["quotient_acyclic", "inclusion_quasi_iso", "eta_quasi_iso", "kunneth_sharp", "tau_additive_sharp", "c_homology_kunneth"] {
            checks.push(skipped(name, size));
        }
        return Ok(VerifyReport { summand_size: sum.g1.n(), size, checks });
    }

    let (r, ms) = timed(|| sum.quotient_acyclicity_check(opts.window.as_ref(), opts.depth));
    checks.push(acyclicity_check("quotient_acyclic", r?, ms));
    let (r, ms) = timed(|| sum.inclusion_quasi_iso_check(opts.window.as_ref(), opts.depth));
    checks.push(acyclicity_check("inclusion_quasi_iso", r?, ms));

    let c = sum.build_c()?;
    let offset = offset.unwrap_or_default();
    let t = shifted(&eta.target, offset);
    let eta_map = eta.chain_map(&c);
    let w = level_window(c.complex(), opts.window.as_ref(), opts.depth)?;
    let (r, ms) = timed(|| quasi_iso_failures(&eta_map, c.complex(), &t, w.levels()));
    let r: Vec<_> = r?.into_iter().filter(|(b, _)| w.contains(*b)).collect();
    checks.push(Check {
        name: "eta_quasi_iso",
        coverage: Coverage::Window,
        passed: r.is_empty(),
        window: Some(w),
        slices: w.levels().count(),
        detail: format!("{} bigradings where the cone of eta has homology", r.len()),
        millis: ms,
    });

    let (full, ms) = timed(|| -> Result<_, ConnectedSumError> {
        let gc = GridComplex::build(&sum.gsharp)?;
        let mut e = HomologyEngine::new(&gc.complex)?;
        Ok(e.resolve(crate::homology::default_probe_depth(&gc.complex))?)
    });
    let full = full?;
    checks.push(check(
        "kunneth_sharp",
        Coverage::Exhaustive,
        full.module == expected,
        format!("H(g#) = {}; tensor_and_tor = {}", full.module, expected),
        ms,
    ));
    checks.push(check(
        "tau_additive_sharp",
        Coverage::Exhaustive,
        full.tau() == tau_sum,
        format!("tau(g#) = {}; tau(g1) + tau(g2) = {}", full.tau(), tau_sum),
        0,
    ));

    let shifted_expected = BigradedUModule::new(
        expected.towers.iter().map(|&b| b + offset).collect(),
        expected.torsion.iter().map(|t| crate::algebra::Torsion { at: t.at + offset, ..*t }).collect(),
    );
    let (r, ms) = timed(|| module_dim_mismatches(c.complex(), &shifted_expected, &w));
    checks.push(Check {
        name: "c_homology_kunneth",
        coverage: Coverage::Window,
        passed: r.is_empty(),
        window: Some(w),
        slices: w.levels().count(),
        detail: if r.is_empty() {
            "H(C) matches tensor_and_tor in the window".to_string()
        } else {
            let per_level: Vec<String> = w
                .levels()
                .rev()
                .map(|a| {
                    let h: usize = LevelComplex::of(c.complex(), a).homology_dims().values().sum();
                    format!("{a}:{h}")
                })
                .collect();
            format!("{} mismatched bigradings; dim H(C) per level {}", r.len(), per_level.join(" "))
        },
        millis: ms,
    });
    Ok(VerifyReport { summand_size: sum.g1.n(), size, checks })
}

/// The grading shift of `eta`'s target and the number of generators whose
/// image has a term of any other shift.
fn eta_homogeneity(sum: &ConnectedSum, eta: &Eta, states: &[State]) -> (Option<Bigrading>, usize) {
    let gr = Gradings::new(&sum.gsharp);
    let Some(ii) = states.iter().find(|x| sum.class(x) == StateClass::II) else { return (None, 0) };
    let t0 = eta.image(ii).terms()[0].clone();
    let offset = gr.bigrading(ii).expect("integral grading") - eta.target.term_grading(&t0);
    let bad = states
        .par_iter()
        .filter(|x| {
            let g = gr.bigrading(x).expect("integral grading");
            eta.image(x).terms().iter().any(|t| eta.target.term_grading(t) + offset != g)
        })
        .count();
    (Some(offset), bad)
}
