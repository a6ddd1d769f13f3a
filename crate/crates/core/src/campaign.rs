//! Seeded randomized campaigns over the inequality catalogue.
//!
//! A campaign is the product checks x dims x p x (t | nu) x trials. Work is
//! split into units of `(check, dim, slot)` where a slot is either a fixed
//! witness or one random trial; a unit draws its operands once and evaluates
//! every exponent and parameter value on them. Units run on a rayon pool and
//! are merged in cell order, so reports do not depend on the thread count.

use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{sample, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::inequalities::{
    check_with, list_registry, lookup, Axis, CheckParams, Evaluator, InequalityRecord, OperandRecipe,
    PRange, RegistryEntry, Variant, Verdict,
};
use crate::linalg::ComplexMatrix;
use crate::schatten::{PExponent, RadiusOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckSelection {
    /// The literal `"all"`.
    Keyword(String),
    List(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantSelection {
    AsPrinted,
    AsDerived,
    Both,
}

impl VariantSelection {
    fn variants(self) -> &'static [Variant] {
        match self {
            VariantSelection::AsPrinted => &[Variant::AsPrinted],
            VariantSelection::AsDerived => &[Variant::AsDerived],
            VariantSelection::Both => &[Variant::AsPrinted, Variant::AsDerived],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub checks: CheckSelection,
    pub dims: Vec<usize>,
    pub p_grid: Vec<PExponent>,
    pub t_grid: Vec<f64>,
    pub nu_grid: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub grid_points: usize,
    pub refine: bool,
    pub variants: VariantSelection,
}

/// The campaign used for acceptance: every entry, both variants.
pub fn default_campaign() -> CampaignConfig {
    let p = |v: f64| PExponent::new(v).expect("valid exponent");
    CampaignConfig {
        checks: CheckSelection::Keyword("all".into()),
        dims: vec![2, 3, 4, 6, 8],
        p_grid: vec![p(1.0), p(1.5), p(2.0), p(3.0), PExponent::INF],
        t_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        nu_grid: vec![0.25, 0.5, 0.75],
        trials: 200,
        base_seed: 20240917,
        grid_points: 720,
        refine: true,
        variants: VariantSelection::Both,
    }
}

impl CampaignConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: CampaignConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.dims.is_empty() || self.p_grid.is_empty() || self.t_grid.is_empty() || self.nu_grid.is_empty() {
            return bad("dims, p_grid, t_grid and nu_grid must be non-empty".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if let Some(n) = self.dims.iter().find(|&&n| n == 0) {
            return bad(format!("dimension {n} is not allowed"));
        }
        for (name, grid) in [("t_grid", &self.t_grid), ("nu_grid", &self.nu_grid)] {
            if let Some(v) = grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return bad(format!("{name} values must lie in [0, 1], got {v}"));
            }
        }
        if self.grid_points < 8 {
            return bad(format!("grid_points must be at least 8, got {}", self.grid_points));
        }
        self.entries().map(|_| ())
    }

    /// Selected registry entries, in selection order.
    pub fn entries(&self) -> Result<Vec<&'static RegistryEntry>> {
        match &self.checks {
            CheckSelection::Keyword(k) if k == "all" => Ok(list_registry().iter().collect()),
            CheckSelection::Keyword(k) => Err(Error::Config(format!(
                "checks must be \"all\" or a list of ids, got \"{k}\""
            ))),
            CheckSelection::List(ids) if ids.is_empty() => Err(Error::Config("checks must be non-empty".into())),
            CheckSelection::List(ids) => ids.iter().map(|id| lookup(id)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub id: String,
    #[serde(default)]
    pub variant: Option<Variant>,
    pub theorem_level: bool,
    pub count: usize,
    pub certified_holds: usize,
    pub certified_violated: usize,
    pub indeterminate: usize,
    pub min_slack: Option<f64>,
    /// Seed of the min-slack record; `None` when it is a fixed witness.
    pub min_slack_witness_seed: Option<u64>,
    /// Witness name of the min-slack record, if it is one.
    #[serde(default)]
    pub min_slack_witness: Option<String>,
    pub equality_attained_count: usize,
    /// Cells that could not be generated or evaluated, with reasons.
    #[serde(default)]
    pub skipped: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub records: Vec<InequalityRecord>,
    pub summary: Vec<SummaryRow>,
    /// Wall-clock seconds; only filled in on request so that reports stay
    /// byte-reproducible.
    pub runtime_s: Option<f64>,
    pub version: String,
}

impl CampaignReport {
    /// Whether any theorem-level entry was certified violated.
    pub fn has_theorem_violation(&self) -> bool {
        self.summary.iter().any(|r| r.theorem_level && r.certified_violated > 0)
    }

    pub fn exit_code(&self) -> i32 {
        if self.has_theorem_violation() {
            2
        } else {
            0
        }
    }

    pub fn write_json(&self, mut w: impl Write) -> Result<()> {
        serde_json::to_writer(&mut w, self)?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        out.write_record([
            "id", "variant", "n", "p", "t", "nu", "seed", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "slack",
            "verdict", "equality",
        ])
        .map_err(csv_err)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            let verdict = match r.verdict {
                Verdict::CertifiedHolds => "certified_holds",
                Verdict::CertifiedViolated => "certified_violated",
                Verdict::Indeterminate => "indeterminate",
            };
            out.write_record([
                r.id.clone(),
                r.params.variant.map(|v| v.name().to_string()).unwrap_or_default(),
                r.operands.n.to_string(),
                r.p.to_string(),
                opt(r.params.t),
                opt(r.params.nu),
                r.operands.seed.map(|s| s.to_string()).unwrap_or_default(),
                r.lhs.lo.to_string(),
                r.lhs.hi.to_string(),
                r.rhs.lo.to_string(),
                r.rhs.hi.to_string(),
                r.slack.to_string(),
                verdict.to_string(),
                r.equality_attained.to_string(),
            ])
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

// ---- seeding --------------------------------------------------------------

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed of one trial; exponents and t/nu values share the trial's operands.
pub fn cell_seed(base_seed: u64, id: &str, n: usize, trial: usize) -> u64 {
    let h = splitmix(base_seed ^ fnv(id));
    let h = splitmix(h ^ n as u64);
    splitmix(h ^ trial as u64)
}

fn operand_seed(seed: u64, k: usize) -> u64 {
    splitmix(seed ^ (k as u64 + 1).wrapping_mul(0xd6e8_feb8_6659_fd93))
}

// ---- operands -------------------------------------------------------------

const GENERAL_CYCLE: [EnsembleKind; 3] = [EnsembleKind::Ginibre, EnsembleKind::RankDeficient, EnsembleKind::Normal];

/// Operands for one trial, a pure function of `(recipe, n, seed)`.
pub fn draw_operands(
    recipe: OperandRecipe,
    n: usize,
    seed: u64,
) -> Result<(Vec<ComplexMatrix>, Vec<String>)> {
    use EnsembleKind as K;
    let pick = (seed >> 33) as usize;
    let general = |k: usize| GENERAL_CYCLE[(pick + k) % 3];
    let kinds: Vec<EnsembleKind> = match recipe {
        OperandRecipe::General => vec![general(0)],
        OperandRecipe::Hermitian => vec![K::Hermitian],
        OperandRecipe::SquareZero => vec![K::SquareZero],
        OperandRecipe::GeneralPair => vec![general(0), general(1)],
        OperandRecipe::PositivePair => vec![K::Positive, K::Positive],
        OperandRecipe::NormalPair => vec![K::Normal, K::Normal],
        OperandRecipe::WithUnitary => vec![general(0), K::HaarUnitary],
        OperandRecipe::PositivePairWithMiddle => vec![K::Positive, K::Positive, K::Ginibre],
        OperandRecipe::SelfAdjointProduct => {
            return if pick.is_multiple_of(2) {
                let a = sample(&EnsembleSpec::new(K::Ginibre, n, operand_seed(seed, 0)))?;
                let names = vec!["ginibre".into(), "adjoint".into()];
                Ok((vec![a.clone(), a.adjoint()], names))
            } else {
                let h = sample(&EnsembleSpec::new(K::Hermitian, n, operand_seed(seed, 0)))?;
                let sq = (&h * &h).hermitian_part();
                Ok((vec![h, sq], vec!["hermitian".into(), "square".into()]))
            };
        }
    };
    let mut ops = Vec::with_capacity(kinds.len());
    for (k, kind) in kinds.iter().enumerate() {
        ops.push(sample(&EnsembleSpec::new(*kind, n, operand_seed(seed, k)))?);
    }
    Ok((ops, kinds.iter().map(|k| k.name().to_string()).collect()))
}

/// Structured witnesses prepended to every cell; entries whose hypotheses
/// they fail skip them silently.
pub fn witnesses(arity: usize, n: usize) -> Vec<(&'static str, Vec<ComplexMatrix>)> {
    let id = ComplexMatrix::identity(n);
    let mut out = vec![("identity", vec![id; arity])];
    if arity == 1 && n == 2 {
        let j2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).expect("2x2");
        out.push(("jordan", vec![j2]));
    }
    out
}

pub fn witness(name: &str, arity: usize, n: usize) -> Result<Vec<ComplexMatrix>> {
    witnesses(arity, n)
        .into_iter()
        .find(|(w, _)| *w == name)
        .map(|(_, ops)| ops)
        .ok_or_else(|| Error::InvalidParameter(format!("no witness `{name}` for arity {arity}, n = {n}")))
}

// ---- running --------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
enum Slot {
    Witness(usize),
    Trial(usize),
}

struct Unit {
    entry: usize,
    dim: usize,
    slot: Slot,
}

/// Everything a unit evaluates, in report order.
struct Plan {
    entries: Vec<&'static RegistryEntry>,
    p_lists: Vec<Vec<PExponent>>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct SortKey {
    entry: usize,
    dim: usize,
    p: usize,
    param: usize,
    slot: usize,
    variant: usize,
}

struct UnitOutput {
    records: Vec<(SortKey, InequalityRecord)>,
    skipped: Option<String>,
}

fn p_list(entry: &RegistryEntry, grid: &[PExponent]) -> Vec<PExponent> {
    match entry.p_range {
        PRange::Fixed { p } => grid.iter().copied().filter(|&q| q == p).take(1).collect(),
        PRange::Range { .. } => grid.iter().copied().filter(|&q| entry.p_range.contains(q)).collect(),
    }
}

fn run_unit(cfg: &CampaignConfig, plan: &Plan, unit: &Unit, ev: &mut Evaluator) -> UnitOutput {
    let entry = plan.entries[unit.entry];
    let n = cfg.dims[unit.dim];
    let mut out = UnitOutput {
        records: Vec::new(),
        skipped: None,
    };
    let (ops, ensembles, seed, witness, slot_idx) = match unit.slot {
        Slot::Witness(k) => {
            let (name, ops) = witnesses(entry.arity, n).swap_remove(k);
            (ops, vec![name.to_string()], None, Some(name.to_string()), k)
        }
        Slot::Trial(k) => {
            let seed = cell_seed(cfg.base_seed, entry.id, n, k);
            match draw_operands(entry.recipe, n, seed) {
                Ok((ops, names)) => (ops, names, Some(seed), None, 16 + k),
                Err(e) => {
                    out.skipped = Some(format!("n={n}: {e}"));
                    return out;
                }
            }
        }
    };
    let params: Vec<(Option<f64>, Option<f64>)> = match entry.axis {
        Axis::T => cfg.t_grid.iter().map(|&t| (Some(t), None)).collect(),
        Axis::Nu => cfg.nu_grid.iter().map(|&nu| (None, Some(nu))).collect(),
        Axis::None => vec![(None, None)],
    };
    let variants: Vec<Option<Variant>> = if entry.variants {
        cfg.variants.variants().iter().copied().map(Some).collect()
    } else {
        vec![None]
    };

    for (pi, &p) in plan.p_lists[unit.entry].iter().enumerate() {
        for (qi, &(t, nu)) in params.iter().enumerate() {
            for (vi, &variant) in variants.iter().enumerate() {
                let cp = CheckParams {
                    t,
                    nu,
                    variant,
                    witness: witness.clone(),
                    ..Default::default()
                };
                match check_with(ev, entry.id, &ops, p, &cp) {
                    Ok(mut rec) => {
                        rec.operands.ensembles = ensembles.clone();
                        rec.operands.seed = seed;
                        let key = SortKey {
                            entry: unit.entry,
                            dim: unit.dim,
                            p: pi,
                            param: qi,
                            slot: slot_idx,
                            variant: vi,
                        };
                        out.records.push((key, rec));
                    }
                    // witnesses that miss a hypothesis are simply not applicable
                    Err(Error::Hypothesis { .. }) if witness.is_some() => return out,
                    Err(e) => {
                        out.skipped = Some(format!("n={n}: {e}"));
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Runs the campaign on `threads` workers (0 = rayon default).
pub fn run_campaign(cfg: &CampaignConfig, threads: usize) -> Result<CampaignReport> {
    cfg.validate()?;
    let entries = cfg.entries()?;
    let p_lists: Vec<Vec<PExponent>> = entries.iter().map(|e| p_list(e, &cfg.p_grid)).collect();
    let plan = Plan { entries, p_lists };

    let mut units = Vec::new();
    for (ei, entry) in plan.entries.iter().enumerate() {
        if plan.p_lists[ei].is_empty() {
            continue;
        }
        for (di, &n) in cfg.dims.iter().enumerate() {
            for w in 0..witnesses(entry.arity, n).len() {
                units.push(Unit { entry: ei, dim: di, slot: Slot::Witness(w) });
            }
            for k in 0..cfg.trials {
                units.push(Unit { entry: ei, dim: di, slot: Slot::Trial(k) });
            }
        }
    }

    let options = RadiusOptions::with_grid(cfg.grid_points, cfg.refine);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outputs: Vec<UnitOutput> = pool.install(|| {
        units
            .par_iter()
            .map_init(
                || Evaluator::with_cache(options, 32),
                |ev, unit| run_unit(cfg, &plan, unit, ev),
            )
            .collect()
    });

    let mut skipped: Vec<BTreeSet<String>> = vec![BTreeSet::new(); plan.entries.len()];
    for (ei, entry) in plan.entries.iter().enumerate() {
        if plan.p_lists[ei].is_empty() {
            skipped[ei].insert(format!("no exponent of p_grid lies in {}", entry.p_range.label()));
        }
    }
    let mut keyed = Vec::new();
    for (unit, out) in units.iter().zip(outputs) {
        if let Some(reason) = out.skipped {
            skipped[unit.entry].insert(reason);
        }
        keyed.extend(out.records);
    }
    keyed.sort_by_key(|(k, _)| *k);
    let records: Vec<InequalityRecord> = keyed.into_iter().map(|(_, r)| r).collect();

    let summary = summary_rows(cfg, &plan.entries, &records, &skipped);
    Ok(CampaignReport {
        config: cfg.clone(),
        records,
        summary,
        runtime_s: None,
        version: VERSION.to_string(),
    })
}

fn summary_rows(
    cfg: &CampaignConfig,
    entries: &[&'static RegistryEntry],
    records: &[InequalityRecord],
    skipped: &[BTreeSet<String>],
) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for (ei, entry) in entries.iter().enumerate() {
        let variants: Vec<Option<Variant>> = if entry.variants {
            cfg.variants.variants().iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for variant in variants {
            let mut row = SummaryRow {
                id: entry.id.to_string(),
                variant,
                theorem_level: entry.theorem_level(),
                count: 0,
                certified_holds: 0,
                certified_violated: 0,
                indeterminate: 0,
                min_slack: None,
                min_slack_witness_seed: None,
                min_slack_witness: None,
                equality_attained_count: 0,
                skipped: skipped[ei].iter().cloned().collect(),
            };
            let mine = records.iter().filter(|r| r.id == entry.id && r.params.variant == variant);
            for r in mine {
                row.count += 1;
                match r.verdict {
                    Verdict::CertifiedHolds => row.certified_holds += 1,
                    Verdict::CertifiedViolated => row.certified_violated += 1,
                    Verdict::Indeterminate => row.indeterminate += 1,
                }
                row.equality_attained_count += r.equality_attained as usize;
                if row.min_slack.is_none_or(|m| r.slack < m) {
                    row.min_slack = Some(r.slack);
                    row.min_slack_witness_seed = r.operands.seed;
                    row.min_slack_witness = r.params.witness.clone();
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Plain-text table of the summary, one row per check and variant.
pub fn summarize(report: &CampaignReport) -> String {
    let mut s = format!(
        "{:<18} {:<11} {:>7} {:>7} {:>9} {:>7} {:>8} {:>12} {:>21}\n",
        "check", "variant", "count", "holds", "violated", "indet", "equality", "min_slack", "min_slack_seed"
    );
    for r in &report.summary {
        let slack = r.min_slack.map_or("-".to_string(), |v| format!("{v:.3e}"));
        let seed = match (&r.min_slack_witness_seed, &r.min_slack_witness) {
            (Some(seed), _) => seed.to_string(),
            (None, Some(w)) => w.clone(),
            _ => "-".to_string(),
        };
        s.push_str(&format!(
            "{:<18} {:<11} {:>7} {:>7} {:>9} {:>7} {:>8} {:>12} {:>21}\n",
            r.id,
            r.variant.map_or("-", |v| v.name()),
            r.count,
            r.certified_holds,
            r.certified_violated,
            r.indeterminate,
            r.equality_attained_count,
            slack,
            seed
        ));
    }
    s
}

/// `key=value` parameters accepted by [`replay`].
#[derive(Clone, Debug, Default)]
pub struct ReplayParams {
    pub n: Option<usize>,
    pub p: Option<PExponent>,
    pub check: CheckParams,
    pub grid_points: Option<usize>,
    pub refine: Option<bool>,
}

impl ReplayParams {
    pub fn parse<S: AsRef<str>>(pairs: &[S]) -> Result<Self> {
        let mut out = ReplayParams::default();
        for kv in pairs {
            let kv = kv.as_ref();
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
            let num = |v: &str| v.parse::<f64>().map_err(|_| Error::Parse(format!("`{k}`: not a number: `{v}`")));
            match k {
                "n" => out.n = Some(v.parse().map_err(|_| Error::Parse(format!("bad dimension `{v}`")))?),
                "p" => out.p = Some(v.parse()?),
                "t" => out.check.t = Some(num(v)?),
                "nu" => out.check.nu = Some(num(v)?),
                "q" => out.check.q = Some(v.parse()?),
                "c" => out.check.pair_scale = Some(num(v)?),
                "variant" => out.check.variant = Some(v.parse()?),
                "witness" => out.check.witness = Some(v.to_string()),
                "grid" | "grid_points" => {
                    out.grid_points = Some(v.parse().map_err(|_| Error::Parse(format!("bad grid `{v}`")))?)
                }
                "refine" => out.refine = Some(v.parse().map_err(|_| Error::Parse(format!("bad bool `{v}`")))?),
                _ => return Err(Error::Parse(format!("unknown replay parameter `{k}`"))),
            }
        }
        Ok(out)
    }
}

/// Regenerates one record from its id, seed and parameters. A witness
/// record is replayed with `witness=<name>` (the seed is then ignored).
pub fn replay(id: &str, seed: u64, params: &ReplayParams) -> Result<InequalityRecord> {
    let entry = lookup(id)?;
    let n = params
        .n
        .ok_or_else(|| Error::InvalidParameter("replay needs the dimension `n`".into()))?;
    let p = match (params.p, entry.p_range) {
        (Some(p), _) => p,
        (None, PRange::Fixed { p }) => p,
        (None, _) => return Err(Error::InvalidParameter("replay needs the exponent `p`".into())),
    };
    let (ops, ensembles, seed) = match &params.check.witness {
        Some(w) => (witness(w, entry.arity, n)?, vec![w.clone()], None),
        None => {
            let (ops, names) = draw_operands(entry.recipe, n, seed)?;
            (ops, names, Some(seed))
        }
    };
    let defaults = RadiusOptions::default();
    let options = RadiusOptions::with_grid(
        params.grid_points.unwrap_or(defaults.grid_points),
        params.refine.unwrap_or(defaults.refine),
    );
    let mut rec = check_with(&mut Evaluator::new(options), id, &ops, p, &params.check)?;
    rec.operands.ensembles = ensembles;
    rec.operands.seed = seed;
    Ok(rec)
}
