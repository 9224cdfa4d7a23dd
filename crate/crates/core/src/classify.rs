//! Verdicts from genus, group and decoupling evidence, the JSON input
//! format, and the scan over all unweighted small-step models.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{format_rational, parse_rational, Pretty, Rational};
use crate::curve::{genus, Genus, GenusReport};
use crate::decouple::{
    decouple_xy, normalize_certificate, pole_disk_check, DecouplingCertificate, DenominatorMode,
    PoleDiskReport, SearchBounds, MAX_LAURENT_DEGREE,
};
use crate::enumerate::{counting_series, guess_algebraic, guess_ode, verify_feq, FeqResidual, GuessReport};
use crate::group::{group_report, searches_agree, GroupReport, OrderResult, DEFAULT_MAX_DEGREE, DEFAULT_ORDER_BOUND};
use crate::model::{build_kernel, degeneracy, DegeneracyReport, DegeneracyStatus, KernelData, ModelError, WeightedModel};

/// Largest accepted order bound for the group search.
pub const MAX_GROUP_N: usize = 64;
/// Largest accepted series order.
pub const MAX_SERIES_ORDER: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bounds {
    pub group_n: usize,
    pub decouple_degree: usize,
    /// Terms used by the enumeration cross-checks; zero skips them.
    pub series_order: usize,
    /// Degree cap for exactly composed plane iterates.
    pub max_degree: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            group_n: DEFAULT_ORDER_BOUND,
            decouple_degree: crate::decouple::DEFAULT_LAURENT_DEGREE,
            series_order: 60,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Outcome {
    Algebraic,
    DFiniteTranscendental,
    DAlgebraicNotDFinite,
    DifferentiallyTranscendental,
    OneDimensionalAlgebraic,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Certainty {
    Proved,
    ConditionalOnInfiniteGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub fact: String,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub outcome: Outcome,
    pub certainty: Certainty,
    pub evidence: Vec<Evidence>,
    /// Set when a step of the chain rests on a bounded search.
    pub caveat: Option<String>,
}

const CITE_DEGENERATE: &str = "degenerate and one-dimensional models have algebraic generating series";
const CITE_GENUS: &str = "genus criterion: the kernel curve has genus zero iff it has a singular point";
const CITE_GENUS_ZERO: &str = "genus zero: the series is x,y,t-differentially transcendental";
const CITE_DFINITE: &str = "dichotomy: D-finite iff the group of the walk is finite";
const CITE_ALGEBRAIC: &str = "dichotomy: algebraic iff the group is finite and xy decouples";
const CITE_DECOUPLE: &str = "genus one: the series is differentially algebraic iff xy decouples";
const CITE_NEITHER: &str = "infinite group and no decoupling: the series is neither D-finite nor differentially algebraic";
const CITE_GROUP: &str = "group of the walk generated by the two Galois involutions of the kernel curve";

fn ev(fact: impl Into<String>, citation: &str) -> Evidence {
    Evidence {
        fact: fact.into(),
        citation: citation.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelSummary {
    pub inventory: String,
    pub kernel: String,
    pub x_sections: [String; 3],
    pub y_sections: [String; 3],
    pub epsilon_weight: String,
}

impl KernelSummary {
    pub fn new(k: &KernelData) -> Self {
        KernelSummary {
            inventory: k.inventory.pretty(&["x", "y", "t"]),
            kernel: k.kernel.pretty(&["x", "y", "t"]),
            x_sections: k.x_sections.clone().map(|s| s.pretty("x")),
            y_sections: k.y_sections.clone().map(|s| s.pretty("y")),
            epsilon_weight: format_rational(&k.epsilon_weight),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecouplingReport {
    pub bounds: SearchBounds,
    /// Normalized so that the polynomial part of `f` has no constant term.
    pub certificate: Option<DecouplingCertificate>,
    /// Present for certificates on models without a finite group order.
    pub pole_disk: Option<PoleDiskReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossChecks {
    pub series_order: usize,
    pub feq: FeqResidual,
    /// Linear ODE search on `Q(1,1;t)`.
    pub ode_q11: Option<GuessReport>,
    /// Algebraic equation search on `Q(0,0;t)`.
    pub algebraic_q00: Option<GuessReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelReport {
    pub input: ModelInput,
    pub kernel: KernelSummary,
    pub degeneracy: DegeneracyReport,
    pub genus: Option<GenusReport>,
    pub group: Option<GroupReport>,
    pub decoupling: Option<DecouplingReport>,
    pub cross_checks: Option<CrossChecks>,
    pub verdict: Verdict,
}

impl ModelReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// A model and bounds as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelInput {
    pub steps: Vec<StepInput>,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepInput {
    pub dx: i64,
    pub dy: i64,
    #[serde(serialize_with = "ser_rational")]
    pub weight: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl ModelInput {
    pub fn new(m: &WeightedModel, bounds: Bounds) -> Self {
        ModelInput {
            steps: m
                .steps()
                .map(|(s, w)| StepInput {
                    dx: s.dx as i64,
                    dy: s.dy as i64,
                    weight: w.clone(),
                })
                .collect(),
            bounds,
        }
    }

    pub fn model(&self) -> Result<WeightedModel, ModelError> {
        WeightedModel::new(self.steps.iter().map(|s| ((s.dx, s.dy), s.weight.clone())))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Schema(String),
    #[error("weight {0} is a float; write it as an exact rational string such as \"3/2\"")]
    Float(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A bound outside the accepted range.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("bound {name} = {value} exceeds the cap {cap}")]
pub struct BoundOverflow {
    pub name: &'static str,
    pub value: usize,
    pub cap: usize,
}

impl Bounds {
    pub fn check(&self) -> Result<(), BoundOverflow> {
        let caps = [
            ("groupN", self.group_n, MAX_GROUP_N),
            ("decoupleDegree", self.decouple_degree, MAX_LAURENT_DEGREE),
            ("seriesOrder", self.series_order, MAX_SERIES_ORDER),
        ];
        for (name, value, cap) in caps {
            if value > cap {
                return Err(BoundOverflow { name, value, cap });
            }
        }
        Ok(())
    }
}

fn schema(msg: impl Into<String>) -> InputError {
    InputError::Schema(msg.into())
}

fn parse_weight(v: &Value) -> Result<Rational, InputError> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| schema(format!("weight {s:?} is not a rational p/q"))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked").into())),
        Value::Number(n) => Err(InputError::Float(n.to_string())),
        other => Err(schema(format!("weight must be a string, found {other}"))),
    }
}

fn parse_int(v: &Value, what: &str) -> Result<i64, InputError> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(n.as_i64().expect("checked")),
        Value::Number(n) => Err(schema(format!("{what} must be an integer, found {n}"))),
        other => Err(schema(format!("{what} must be an integer, found {other}"))),
    }
}

fn object<'a>(v: &'a Value, what: &str, allowed: &[&str]) -> Result<&'a serde_json::Map<String, Value>, InputError> {
    let obj = v.as_object().ok_or_else(|| schema(format!("{what} must be an object")))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(format!("unknown field {k:?} in {what}")));
    }
    Ok(obj)
}

/// Parses `{ "steps": [{"dx", "dy", "weight"}], "bounds": {...} }`. Weights
/// are rational strings (integers are accepted); floats are rejected.
pub fn parse_input(text: &str) -> Result<ModelInput, InputError> {
    let v: Value = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    let top = object(&v, "input", &["steps", "bounds"])?;
    let steps = top
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing array \"steps\""))?;
    let mut out = Vec::with_capacity(steps.len());
    for s in steps {
        let o = object(s, "step", &["dx", "dy", "weight"])?;
        let get = |k: &str| o.get(k).ok_or_else(|| schema(format!("step is missing {k:?}")));
        let weight = match o.get("weight") {
            Some(w) => parse_weight(w)?,
            None => Rational::from_integer(1.into()),
        };
        out.push(StepInput {
            dx: parse_int(get("dx")?, "dx")?,
            dy: parse_int(get("dy")?, "dy")?,
            weight,
        });
    }
    let mut bounds = Bounds::default();
    if let Some(b) = top.get("bounds") {
        let o = object(b, "bounds", &["groupN", "decoupleDegree", "seriesOrder", "maxDegree"])?;
        let field = |k: &str, slot: &mut usize| -> Result<(), InputError> {
            if let Some(v) = o.get(k) {
                let n = parse_int(v, k)?;
                *slot = usize::try_from(n).map_err(|_| schema(format!("{k} must be nonnegative")))?;
            }
            Ok(())
        };
        field("groupN", &mut bounds.group_n)?;
        field("decoupleDegree", &mut bounds.decouple_degree)?;
        field("seriesOrder", &mut bounds.series_order)?;
        field("maxDegree", &mut bounds.max_degree)?;
    }
    let input = ModelInput { steps: out, bounds };
    input.model()?;
    Ok(input)
}

/// Guess windows that fit in `n` terms: order (or `Y`-degree) 3, and the
/// largest coefficient degree the overdetermination margin allows.
fn cross_checks(m: &WeightedModel, n: usize) -> CrossChecks {
    use crate::enumerate::OVERDETERMINATION;
    let feq = verify_feq(m, n.max(1));
    let degree = (n.saturating_sub(OVERDETERMINATION) / 4).checked_sub(1);
    let (ode_q11, algebraic_q00) = match degree {
        Some(d) if n > 0 => {
            let s = counting_series(m, n - 1);
            (guess_ode(&s.q11, 3, d).ok(), guess_algebraic(&s.q00, 3, d).ok())
        }
        _ => (None, None),
    };
    CrossChecks {
        series_order: n,
        feq,
        ode_q11,
        algebraic_q00,
    }
}

pub fn classify(m: &WeightedModel, bounds: Bounds) -> ModelReport {
    let k = build_kernel(m);
    let input = ModelInput::new(m, bounds);
    let kernel = KernelSummary::new(&k);
    let degeneracy = degeneracy(m);
    let cross = (bounds.series_order > 0).then(|| cross_checks(m, bounds.series_order));
    let report = |genus, group, decoupling, verdict| ModelReport {
        input: input.clone(),
        kernel: kernel.clone(),
        degeneracy: degeneracy.clone(),
        genus,
        group,
        decoupling,
        cross_checks: cross.clone(),
        verdict,
    };
    if degeneracy.is_degenerate() {
        let outcome = if degeneracy.status == DegeneracyStatus::OneDimensional {
            Outcome::OneDimensionalAlgebraic
        } else {
            Outcome::Degenerate
        };
        let verdict = Verdict {
            outcome,
            certainty: Certainty::Proved,
            evidence: vec![ev(
                format!("{:?}: {}", degeneracy.status, degeneracy.witness),
                CITE_DEGENERATE,
            )],
            caveat: None,
        };
        return report(None, None, None, verdict);
    }
    let g = genus(&k).expect("nondegenerate model");
    let mut evidence = vec![ev(format!("genus {:?}: {}", g.genus, g.witness), CITE_GENUS)];
    if g.genus == Genus::Zero {
        evidence.push(ev("genus zero", CITE_GENUS_ZERO));
        let verdict = Verdict {
            outcome: Outcome::DifferentiallyTranscendental,
            certainty: Certainty::Proved,
            evidence,
            caveat: None,
        };
        return report(Some(g), None, None, verdict);
    }
    let group = group_report(&k, bounds.group_n, bounds.max_degree);
    let search = SearchBounds::new(bounds.decouple_degree, DenominatorMode::DiscriminantFactors);
    let certificate = decouple_xy(&k, search).certificate().map(normalize_certificate);
    let finite = group.order_curve.finite();
    let pole_disk = match (&certificate, finite) {
        (Some(c), None) => Some(pole_disk_check(c)),
        _ => None,
    };
    evidence.push(match group.order_curve {
        OrderResult::Finite(n) => ev(
            format!("theta has order {n}, group of order {}: {}", 2 * n, group.certificate),
            CITE_GROUP,
        ),
        OrderResult::NoOrderUpTo(_) => ev(group.certificate.clone(), CITE_GROUP),
        OrderResult::DegreeOverflow { checked, degree } => ev(
            format!("theta^k != id for k <= {checked}; the next iterate exceeds degree {degree}"),
            CITE_GROUP,
        ),
    });
    evidence.push(match &certificate {
        Some(c) => ev(
            format!(
                "xy = f(x) + g(y) + K h with f = {}, g = {}",
                c.f.pretty(&["x", "t"]),
                c.g.pretty(&["y", "t"])
            ),
            CITE_DECOUPLE,
        ),
        None => ev(
            format!(
                "no decoupling with Laurent degree <= {} and discriminant poles",
                bounds.decouple_degree
            ),
            CITE_DECOUPLE,
        ),
    });
    let bounded = "absence of a decoupling is established only up to the search bounds".to_string();
    let (outcome, certainty, caveat) = match (finite, certificate.is_some()) {
        (Some(_), true) => {
            evidence.push(ev("finite group and a decoupling", CITE_ALGEBRAIC));
            (Outcome::Algebraic, Certainty::Proved, None)
        }
        (Some(_), false) => {
            evidence.push(ev("finite group", CITE_DFINITE));
            (Outcome::DFiniteTranscendental, Certainty::Proved, Some(bounded))
        }
        (None, true) => {
            evidence.push(ev("no finite order found and a decoupling", CITE_DFINITE));
            (Outcome::DAlgebraicNotDFinite, Certainty::ConditionalOnInfiniteGroup, None)
        }
        (None, false) => {
            evidence.push(ev("no finite order found and no decoupling", CITE_NEITHER));
            (
                Outcome::DifferentiallyTranscendental,
                Certainty::ConditionalOnInfiniteGroup,
                Some(bounded),
            )
        }
    };
    let decoupling = DecouplingReport {
        bounds: search,
        certificate,
        pole_disk,
    };
    let verdict = Verdict {
        outcome,
        certainty,
        evidence,
        caveat,
    };
    report(Some(g), Some(group), Some(decoupling), verdict)
}

/// One row of the corpus table.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusEntry {
    pub mask: u8,
    pub steps: String,
    /// Smallest mask among the model and its transpose.
    pub orbit: u8,
    pub degeneracy: DegeneracyStatus,
    pub genus: Option<Genus>,
    pub order_plane: Option<OrderResult>,
    pub order_curve: Option<OrderResult>,
    pub group_order: Option<usize>,
    /// Plane and curve searches are compatible.
    pub searches_agree: Option<bool>,
    pub decoupled: Option<bool>,
    pub in_disk_pole: Option<bool>,
    pub outcome: Option<Outcome>,
    pub certainty: Option<Certainty>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusSummary {
    pub bounds: Bounds,
    pub models: usize,
    pub nondegenerate: usize,
    pub nondegenerate_orbits: usize,
    pub finite_group: usize,
    pub finite_group_orbits: usize,
    pub by_outcome: BTreeMap<String, usize>,
    pub by_genus: BTreeMap<String, usize>,
    pub by_group_order: BTreeMap<String, usize>,
    pub errors: usize,
    pub entries: Vec<CorpusEntry>,
}

fn corpus_entry(mask: u8, bounds: Bounds) -> CorpusEntry {
    let m = WeightedModel::from_mask(mask).expect("nonempty mask");
    let orbit = mask.min(m.transpose().mask());
    let mut entry = CorpusEntry {
        mask,
        steps: m.to_string(),
        orbit,
        degeneracy: degeneracy(&m).status,
        genus: None,
        order_plane: None,
        order_curve: None,
        group_order: None,
        searches_agree: None,
        decoupled: None,
        in_disk_pole: None,
        outcome: None,
        certainty: None,
        error: None,
    };
    let run = std::panic::catch_unwind(|| classify(&m, bounds));
    match run {
        Ok(r) => {
            entry.genus = r.genus.as_ref().map(|g| g.genus);
            if let Some(g) = &r.group {
                entry.order_plane = Some(g.order_plane);
                entry.order_curve = Some(g.order_curve);
                entry.group_order = g.group_order;
                entry.searches_agree = Some(searches_agree(&g.order_plane, &g.order_curve));
            }
            if let Some(d) = &r.decoupling {
                entry.decoupled = Some(d.certificate.is_some());
                entry.in_disk_pole = d.pole_disk.as_ref().map(|p| p.in_disk_pole);
            }
            entry.outcome = Some(r.verdict.outcome);
            entry.certainty = Some(r.verdict.certainty);
        }
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            entry.error = Some(msg);
        }
    }
    entry
}

/// Classifies the unweighted models with the given masks, in parallel;
/// the output order follows `masks`.
pub fn run_masks(masks: &[u8], bounds: Bounds) -> Vec<CorpusEntry> {
    masks.par_iter().map(|&m| corpus_entry(m, bounds)).collect()
}

/// All 255 nonempty unweighted step sets.
pub fn run_corpus(bounds: Bounds) -> CorpusSummary {
    let masks: Vec<u8> = (1..=255).collect();
    summarize(run_masks(&masks, bounds), bounds)
}

pub fn summarize(entries: Vec<CorpusEntry>, bounds: Bounds) -> CorpusSummary {
    let nondeg: Vec<&CorpusEntry> = entries
        .iter()
        .filter(|e| e.degeneracy == DegeneracyStatus::NonDegenerate)
        .collect();
    let orbits = |it: &mut dyn Iterator<Item = &&CorpusEntry>| {
        it.map(|e| e.orbit).collect::<std::collections::BTreeSet<_>>().len()
    };
    let finite: Vec<&CorpusEntry> = nondeg
        .iter()
        .copied()
        .filter(|e| e.order_curve.and_then(|o| o.finite()).is_some())
        .collect();
    let mut by_outcome = BTreeMap::new();
    let mut by_genus = BTreeMap::new();
    let mut by_group_order = BTreeMap::new();
    for e in &entries {
        if let Some(o) = e.outcome {
            *by_outcome.entry(format!("{o:?}")).or_insert(0) += 1;
        }
        if let Some(g) = e.genus {
            *by_genus.entry(format!("{g:?}")).or_insert(0) += 1;
        }
        if let Some(o) = e.order_curve {
            let key = match o.finite() {
                Some(n) => (2 * n).to_string(),
                None => "infinite (conjectural)".into(),
            };
            *by_group_order.entry(key).or_insert(0) += 1;
        }
    }
    CorpusSummary {
        bounds,
        models: entries.len(),
        nondegenerate: nondeg.len(),
        nondegenerate_orbits: orbits(&mut nondeg.iter()),
        finite_group: finite.len(),
        finite_group_orbits: orbits(&mut finite.iter()),
        by_outcome,
        by_genus,
        by_group_order,
        errors: entries.iter().filter(|e| e.error.is_some()).count(),
        entries,
    }
}
