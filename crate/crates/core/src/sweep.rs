//! Parameter sweeps over moduli, characters and identity parameters, plus
//! the single-point `explain` breakdown.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{FuncSpec, IdealFunc};
use crate::characters::{all_characters, Character};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::identity::{
    assemble_record, rhs_breakdown, Budgets, ConvolutionKernel, DpKernel, Evaluator, IdentityParams, NaiveKernel,
    VerificationRecord,
};
use crate::ideals::{ideals_up_to_norm, Ideal, IdealLiteral};
use crate::numfield::{json_bigint, AlgInt, NumberField};
use crate::par::{self, Execution};
use crate::residue::ResidueRing;

#[derive(Debug, Clone, PartialEq)]
pub enum ModulusSelector {
    Explicit(IdealLiteral),
    /// Every ideal with `1 < N(n) ≤ bound`.
    MaxNorm(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharSelector {
    All,
    Trivial,
    Index(usize),
}

impl CharSelector {
    pub fn parse(text: &str) -> Result<CharSelector> {
        match text {
            "all" => Ok(CharSelector::All),
            "trivial" => Ok(CharSelector::Trivial),
            _ => text
                .strip_prefix("idx:")
                .and_then(|i| i.parse().ok())
                .map(CharSelector::Index)
                .ok_or_else(|| Error::Parse(format!("bad character selector '{text}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RSelector {
    /// The first `count` units in residue order.
    First(usize),
    /// Explicit coordinate vectors.
    Explicit(Vec<Vec<serde_json::Value>>),
}

impl RSelector {
    /// `first:<count>`, a single coordinate list `[1,0]`, or a list of them.
    pub fn parse(text: &str) -> Result<RSelector> {
        if let Some(c) = text.strip_prefix("first:") {
            return c
                .parse()
                .map(RSelector::First)
                .map_err(|_| Error::Parse(format!("bad r selector '{text}'")));
        }
        let v: serde_json::Value = serde_json::from_str(text)?;
        let list = match v {
            serde_json::Value::Array(items) if items.iter().all(|x| x.is_array()) => {
                items.into_iter().map(|x| x.as_array().cloned().unwrap_or_default()).collect()
            }
            serde_json::Value::Array(items) => vec![items],
            _ => return Err(Error::Parse(format!("bad r selector '{text}'"))),
        };
        Ok(RSelector::Explicit(list))
    }

    fn choose(&self, ring: &ResidueRing) -> Result<Vec<AlgInt>> {
        match self {
            RSelector::First(c) => Ok(ring.unit_indices().iter().take(*c).map(|&i| ring.element(i)).collect()),
            RSelector::Explicit(list) => list
                .iter()
                .map(|coords| {
                    let c = coords.iter().map(json_bigint).collect::<Result<Vec<_>>>()?;
                    ring.field().element(c)
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub fields: Vec<Arc<NumberField>>,
    pub modulus: ModulusSelector,
    pub ks: Vec<u32>,
    pub ss: Vec<u32>,
    pub chars: CharSelector,
    pub rs: RSelector,
    pub fs: Vec<FuncSpec>,
    pub evaluators: Vec<Evaluator>,
    pub budgets: Budgets,
    pub execution: Execution,
    pub jobs: Option<usize>,
    /// Added to every closed form; nonzero only to exercise failure paths.
    pub rhs_shift: i64,
}

impl SweepConfig {
    pub fn new(fields: Vec<Arc<NumberField>>, modulus: ModulusSelector) -> SweepConfig {
        SweepConfig {
            fields,
            modulus,
            ks: vec![1],
            ss: vec![0],
            chars: CharSelector::All,
            rs: RSelector::First(1),
            fs: vec![FuncSpec::Norm],
            evaluators: Evaluator::ALL.to_vec(),
            budgets: Budgets::default(),
            execution: Execution::default(),
            jobs: None,
            rhs_shift: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.ks.is_empty() || self.ss.is_empty() || self.fs.is_empty() || self.evaluators.is_empty() {
            return bad("parameter ranges must be nonempty");
        }
        if self.ks.contains(&0) {
            return bad("k must be positive");
        }
        if self.budgets.naive == 0 || self.budgets.dp == 0 {
            return bad("budgets must be positive");
        }
        if matches!(self.rs, RSelector::First(0)) {
            return bad("r selector chooses no values");
        }
        Ok(())
    }
}

/// A grid point that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub field: String,
    pub n: IdealLiteral,
    pub k: Option<u32>,
    pub s: Option<u32>,
    pub char_index: Option<usize>,
    pub f: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<VerificationRecord>,
    pub errors: Vec<PointError>,
    pub summary: Summary,
}

impl SweepReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 && self.summary.errored == 0 {
            0
        } else {
            1
        }
    }

    fn push(&mut self, outcome: std::result::Result<VerificationRecord, PointError>) {
        self.summary.total += 1;
        match outcome {
            Ok(rec) => {
                if rec.equal {
                    self.summary.passed += 1;
                } else {
                    self.summary.failed += 1;
                }
                self.records.push(rec);
            }
            Err(e) => {
                self.summary.errored += 1;
                self.errors.push(e);
            }
        }
    }
}

/// The moduli a sweep visits, per field, in norm order.
pub fn moduli(cfg: &SweepConfig) -> Result<Vec<(Arc<NumberField>, Ideal)>> {
    let mut out = Vec::new();
    for field in &cfg.fields {
        match &cfg.modulus {
            ModulusSelector::Explicit(lit) => out.push((field.clone(), lit.build(field)?)),
            ModulusSelector::MaxNorm(bound) => {
                for n in ideals_up_to_norm(field, *bound) {
                    if !n.is_unit() {
                        out.push((field.clone(), n));
                    }
                }
            }
        }
    }
    Ok(out)
}

type Outcome = std::result::Result<VerificationRecord, PointError>;

/// Structures shared by every point with the same modulus.
struct ModulusWork {
    ring: Arc<ResidueRing>,
    chars: Vec<Character>,
    rs: Vec<AlgInt>,
    fs: Vec<IdealFunc>,
    naive: HashMap<(u32, u32, usize), NaiveKernel>,
    conv: HashMap<(u32, usize), ConvolutionKernel>,
}

fn modulus_error(field: &NumberField, n: &Ideal, e: &Error) -> PointError {
    PointError {
        field: field.name().into(),
        n: IdealLiteral::of(n),
        k: None,
        s: None,
        char_index: None,
        f: None,
        error: e.to_string(),
    }
}

fn prepare(cfg: &SweepConfig, n: &Ideal) -> Result<ModulusWork> {
    let ring = Arc::new(ResidueRing::new(n)?);
    let chars = match cfg.chars {
        CharSelector::All => all_characters(&ring),
        CharSelector::Trivial => vec![Character::trivial(&ring)],
        CharSelector::Index(i) => vec![Character::from_index(&ring, i)?],
    };
    let rs = cfg.rs.choose(&ring)?;
    let fs = cfg.fs.iter().map(|f| f.tabulate(ring.lattice())).collect::<Result<Vec<_>>>()?;
    let norm = ring.size() as u64;
    let r_indices: Vec<usize> = rs.iter().map(|r| ring.index_of(r)).collect::<Result<_>>()?;
    let wants = |ev: Evaluator, k: u32, s: u32| cfg.evaluators.contains(&ev) && cfg.budgets.allows(ev, norm, k, s);

    let mut naive_keys = Vec::new();
    let mut conv_keys = Vec::new();
    for &k in &cfg.ks {
        for &ri in r_indices.iter().filter(|&&ri| ring.is_unit_index(ri)) {
            if cfg.ss.iter().any(|&s| wants(Evaluator::Convolution, k, s)) {
                conv_keys.push((k, ri));
            }
            for &s in &cfg.ss {
                if wants(Evaluator::Naive, k, s) {
                    naive_keys.push((k, s, ri));
                }
            }
        }
    }
    naive_keys.dedup();
    conv_keys.dedup();
    let naive = par::map(cfg.execution, &naive_keys, |&(k, s, ri)| ((k, s, ri), NaiveKernel::build(&ring, k, s, ri)))
        .into_iter()
        .collect();
    let conv = par::map(cfg.execution, &conv_keys, |&(k, ri)| ((k, ri), ConvolutionKernel::build(&ring, k, ri)))
        .into_iter()
        .collect();
    Ok(ModulusWork { ring, chars, rs, fs, naive, conv })
}

fn run_character(cfg: &SweepConfig, work: &ModulusWork, chi: &Character) -> Vec<Outcome> {
    let ring = &work.ring;
    let norm = ring.size() as u64;
    let mut out = Vec::new();
    for &k in &cfg.ks {
        let dp = (cfg.evaluators.contains(&Evaluator::Dp) && cfg.budgets.allows(Evaluator::Dp, norm, k, 0))
            .then(|| DpKernel::build(chi, k));
        for &s in &cfg.ss {
            for r in &work.rs {
                for f in &work.fs {
                    let started = Instant::now();
                    let point_error = |e: Error| PointError {
                        field: ring.field().name().into(),
                        n: IdealLiteral::of(ring.modulus()),
                        k: Some(k),
                        s: Some(s),
                        char_index: Some(chi.index()),
                        f: Some(f.name().into()),
                        error: e.to_string(),
                    };
                    let p = match IdentityParams::new(ring, k, s, r.clone(), chi, f.clone()) {
                        Ok(p) => p,
                        Err(e) => {
                            out.push(Err(point_error(e)));
                            continue;
                        }
                    };
                    let ri = p.r_index();
                    let mut lhs = Vec::new();
                    for &ev in &cfg.evaluators {
                        match ev {
                            Evaluator::Naive => {
                                if let Some(kern) = work.naive.get(&(k, s, ri)) {
                                    lhs.push((ev, kern.evaluate(&p)));
                                }
                            }
                            Evaluator::Convolution => {
                                if cfg.budgets.allows(ev, norm, k, s) {
                                    if let Some(kern) = work.conv.get(&(k, ri)) {
                                        lhs.push((ev, kern.evaluate(&p)));
                                    }
                                }
                            }
                            Evaluator::Dp => {
                                if let Some(kern) = &dp {
                                    lhs.push((ev, kern.evaluate(&p)));
                                }
                            }
                        }
                    }
                    if lhs.is_empty() {
                        let budget_error = cfg
                            .evaluators
                            .iter()
                            .find_map(|&ev| cfg.budgets.check(ev, norm, k, s).err())
                            .unwrap_or_else(|| Error::InvalidParams("no evaluator selected".into()));
                        out.push(Err(point_error(budget_error)));
                        continue;
                    }
                    out.push(assemble_record(&p, lhs, started, cfg.rhs_shift).map_err(point_error));
                }
            }
        }
    }
    out
}

fn run_modulus(cfg: &SweepConfig, field: &NumberField, n: &Ideal) -> Vec<Outcome> {
    let work = match prepare(cfg, n) {
        Ok(w) => w,
        Err(e) => return vec![Err(modulus_error(field, n, &e))],
    };
    par::map(cfg.execution, &work.chars, |chi| run_character(cfg, &work, chi)).into_iter().flatten().collect()
}

/// Verifies the identity on every grid point. Records keep a deterministic
/// order: modulus, character, `k`, `s`, `r`, `f`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let moduli = moduli(cfg)?;
    let outcomes = par::with_jobs(cfg.execution, cfg.jobs, || {
        par::map(cfg.execution, &moduli, |(field, n)| run_modulus(cfg, field, n))
    });
    let mut report = SweepReport::default();
    for outcome in outcomes.into_iter().flatten() {
        report.push(outcome);
    }
    Ok(report)
}

/// One parameter tuple for `explain`.
#[derive(Debug, Clone)]
pub struct Point {
    pub field: Arc<NumberField>,
    pub n: Ideal,
    pub k: u32,
    pub s: u32,
    pub char_index: usize,
    pub r: AlgInt,
    pub f: FuncSpec,
}

/// Human-readable breakdown of the closed form next to the left side,
/// returned with the equality verdict.
pub fn explain(point: &Point, evaluators: &[Evaluator], budgets: &Budgets, rhs_shift: i64) -> Result<(String, bool)> {
    let ring = Arc::new(ResidueRing::new(&point.n)?);
    let chi = Character::from_index(&ring, point.char_index)?;
    let f = point.f.tabulate(ring.lattice())?;
    let p = IdentityParams::new(&ring, point.k, point.s, point.r.clone(), &chi, f)?;
    let norm = ring.size() as u64;
    let usable: Vec<Evaluator> =
        evaluators.iter().copied().filter(|&ev| budgets.allows(ev, norm, point.k, point.s)).collect();
    if usable.is_empty() {
        let ev = evaluators.first().copied().unwrap_or(Evaluator::Dp);
        budgets.check(ev, norm, point.k, point.s)?;
    }
    let record = crate::identity::verify(&p, &usable, budgets)?;
    let b = rhs_breakdown(&p)?;
    let rhs = b.value.add(&CycInt::from_int(1, rhs_shift));
    let lhs = p_lhs(&p, &usable, budgets)?;
    let equal = record.equal && rhs_shift == 0;

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "field          {}", ring.field().name());
    let _ = writeln!(w, "n              {}  (N = {})", ring.modulus(), norm);
    let _ = writeln!(w, "k, s           {}, {}", p.k, p.s);
    let _ = writeln!(w, "r              {}", p.r);
    let _ = writeln!(w, "f              {}", p.f.name());
    let _ = writeln!(w, "character      #{} exps {:?} (values in Z[z{}])", chi.index(), chi.exps(), chi.order());
    let _ = writeln!(w, "d (conductor)  {}  (N = {})", b.conductor, b.conductor.norm());
    let _ = writeln!(w, "n0             {}", b.n_zero);
    let _ = writeln!(w, "n/n0           {}", b.n_over_n_zero);
    let _ = writeln!(w, "psi(r)         {}", b.psi_r);
    let _ = writeln!(w, "mu(d)^(k-1)    {}", b.mu_power);
    let _ = writeln!(w, "phi(n0^k/d^(k-1)) {}", b.phi_factor);
    let _ = writeln!(w, "phi_k(n/n0)    {}", b.phi_k_factor);
    let _ = writeln!(w, "e-sum terms    (mu*f)(e)/phi(e) * (N(n)/N(e))^s:");
    for (e, term) in &b.e_terms {
        let _ = writeln!(w, "  e = {e}: {term}");
    }
    let _ = writeln!(w, "scalar         {}", b.scalar);
    let _ = writeln!(w, "lhs            {}  [{}]", lhs, record.evaluators.join(", "));
    let _ = writeln!(w, "rhs            {}", rhs);
    let _ = writeln!(w, "equal          {}", equal);
    Ok((out, equal))
}

fn p_lhs(p: &IdentityParams, usable: &[Evaluator], budgets: &Budgets) -> Result<CycInt> {
    match usable.first() {
        Some(Evaluator::Naive) => crate::identity::lhs_naive(p, budgets),
        Some(Evaluator::Convolution) => crate::identity::lhs_convolution(p, budgets),
        _ => crate::identity::lhs_dp(p, budgets),
    }
}
