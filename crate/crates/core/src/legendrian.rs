//! Canonical corner states `x+`, `x-`, their classes `lambda+`, `lambda-`
//! (with `theta = lambda+`), and their behavior under `eta`.

use crate::algebra::{Bigrading, GenId, ModuleElement};
use crate::complex::{ComplexError, GridComplex};
use crate::connected_sum::{ConnectedSum, ConnectedSumError, Eta, EtaRule, StateClass};
use crate::grid::GridDiagram;
use crate::homology::{default_probe_depth, ClassLocation, HomologyEngine, HomologyError};
use crate::state::State;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LegendrianError {
    #[error("x{0} is not a cycle")]
    NotACycle(Corner),
    #[error("x{0} is not a generator of the complex")]
    MissingState(Corner),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    ConnectedSum(#[from] ConnectedSumError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    Plus,
    Minus,
}

impl Corner {
    pub const BOTH: [Corner; 2] = [Corner::Plus, Corner::Minus];
}

impl std::fmt::Display for Corner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Corner::Plus => "+",
            Corner::Minus => "-",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalState {
    pub which: Corner,
    pub state: State,
}

/// `x+` takes the upper-right corner of every X square, `x-` the lower-left.
pub fn canonical_state(d: &GridDiagram, which: Corner) -> CanonicalState {
    let n = d.n();
    let mut v = vec![0usize; n];
    for (i, &r) in d.x_row().iter().enumerate() {
        match which {
            Corner::Plus => v[(i + 1) % n] = (r + 1) % n,
            Corner::Minus => v[i] = r,
        }
    }
    CanonicalState { which, state: State::new(&v).expect("X markings form a permutation") }
}

#[derive(Clone, Debug, Serialize)]
pub struct LegendrianClass {
    pub which: Corner,
    pub state: Vec<u8>,
    pub bigrading: Bigrading,
    pub location: ClassLocation,
    #[serde(skip)]
    pub cycle: ModuleElement,
}

/// Locates `[x(which)]` in the homology computed by `engine` over `gc`.
pub fn lambda(gc: &GridComplex, engine: &mut HomologyEngine<'_>, which: Corner) -> Result<LegendrianClass, LegendrianError> {
    let x = canonical_state(&gc.diagram, which).state;
    let id = gc.id(&x).ok_or(LegendrianError::MissingState(which))?;
    let cycle = ModuleElement::generator(id);
    if !gc.complex.d(id).is_zero() {
        return Err(LegendrianError::NotACycle(which));
    }
    let bigrading = gc.complex.grading(id);
    if bigrading.alexander <= engine.lowest() {
        engine.extend_to(bigrading.alexander - 1);
    }
    let location = engine.locate(&cycle)?;
    Ok(LegendrianClass { which, state: x.as_bytes().to_vec(), bigrading, location, cycle })
}

/// `lambda+` and `lambda-` of a knot diagram, resolving homology deep enough
/// to place the tower.
pub fn lambdas(d: &GridDiagram) -> Result<[LegendrianClass; 2], LegendrianError> {
    let gc = GridComplex::build(d)?;
    let mut engine = HomologyEngine::new(&gc.complex)?;
    engine.resolve(default_probe_depth(&gc.complex))?;
    Ok([lambda(&gc, &mut engine, Corner::Plus)?, lambda(&gc, &mut engine, Corner::Minus)?])
}

/// The transverse invariant: `lambda+`.
pub fn theta(d: &GridDiagram) -> Result<LegendrianClass, LegendrianError> {
    let [plus, _] = lambdas(d)?;
    Ok(plus)
}

/// `eta(x(g#)) = x(g1) (x) x(g2)`, term for term.
#[derive(Clone, Debug, Serialize)]
pub struct ChainIdentity {
    pub which: Corner,
    pub class: StateClass,
    pub is_cycle: bool,
    pub holds: bool,
}

/// The class of `x(g#)` in `GH(g#)` against the class of `x(g1) (x) x(g2)`
/// in the homology of the target of `eta`.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyIdentity {
    pub which: Corner,
    pub sharp: ClassLocation,
    pub tensor: ClassLocation,
    pub sharp_bigrading: Bigrading,
    /// Bigrading of the tensor class shifted by the grading offset of `eta`.
    pub tensor_bigrading: Bigrading,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditivityReport {
    pub size: usize,
    pub chain: Vec<ChainIdentity>,
    pub homology: Option<Vec<HomologyIdentity>>,
    /// Why the homology-level comparison was skipped.
    pub scale: Option<String>,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.chain.iter().all(|c| c.holds && c.is_cycle)
            && self.homology.as_ref().is_none_or(|h| h.iter().all(|c| c.holds))
    }
}

/// Checks both identities at the chain level, and at the homology level when
/// `g#` has size at most `homology_max_size`.
pub fn additivity_check(g1: &GridDiagram, g2: &GridDiagram, homology_max_size: usize) -> Result<AdditivityReport, LegendrianError> {
    let sum = ConnectedSum::new(g1, g2)?;
    let eta = Eta::new(&sum, EtaRule::Corrected)?;
    let tensor_id = |which: Corner| -> Result<GenId, LegendrianError> {
        let a = eta.left_base.id(&canonical_state(&sum.g1, which).state).ok_or(LegendrianError::MissingState(which))?;
        let b = eta.right_base.id(&canonical_state(&sum.g2, which).state).ok_or(LegendrianError::MissingState(which))?;
        Ok(eta.target_id(a, b))
    };
    let mut chain = Vec::new();
    for which in Corner::BOTH {
        let x = canonical_state(&sum.gsharp, which).state;
        let is_cycle = crate::complex::grid_boundary(&sum.gsharp, &x).is_empty();
        let holds = eta.image(&x) == ModuleElement::generator(tensor_id(which)?);
        chain.push(ChainIdentity { which, class: sum.class(&x), is_cycle, holds });
    }
    let size = sum.gsharp.n();
    if size > homology_max_size {
        return Ok(AdditivityReport {
            size,
            chain,
            homology: None,
            scale: Some(format!("homology of GC(g#) not computed at {size}x{size}")),
        });
    }
    let c = sum.build_c()?;
    let offset = eta.grading_offset(&c).ok_or(ConnectedSumError::NotChainMap { map: "eta", count: 1 })?;
    let full = GridComplex::build(&sum.gsharp)?;
    let mut e_full = HomologyEngine::new(&full.complex)?;
    e_full.resolve(default_probe_depth(&full.complex))?;
    let mut e_t = HomologyEngine::new(&eta.target)?;
    e_t.resolve(default_probe_depth(&eta.target))?;
    let mut homology = Vec::new();
    for which in Corner::BOTH {
        let sharp = lambda(&full, &mut e_full, which)?;
        let t = ModuleElement::generator(tensor_id(which)?);
        let g = eta.target.term_grading(&t.terms()[0]);
        if g.alexander <= e_t.lowest() {
            e_t.extend_to(g.alexander - 1);
        }
        let tensor = e_t.locate(&t)?;
        let tensor_bigrading = g + offset;
        homology.push(HomologyIdentity {
            which,
            sharp: sharp.location,
            tensor,
            sharp_bigrading: sharp.bigrading,
            tensor_bigrading,
            holds: sharp.location == tensor && sharp.bigrading == tensor_bigrading && sharp.location != ClassLocation::Zero,
        });
    }
    Ok(AdditivityReport { size, chain, homology: Some(homology), scale: None })
}
