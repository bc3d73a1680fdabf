//! Command implementations for the `coverlab` binary. Each command returns
//! its JSON document and whether every check passed.

use std::time::Instant;

use coverlab::cauchy::{completeness_witness, completion, separation_witness, CompletionSpace};
use coverlab::coverspace::{
    cr_witness, find_isomorphism, is_proper, regular_reflection, satisfies_cr, strong_regularity_witness,
};
use coverlab::locale::{build_l, points, verify_equivalence, FiniteLocale};
use coverlab::spacefile::{subset_json, SpaceFile, SpaceFileError};
use coverlab::xreal::compact::{ball_cover, certify_coverage, finite_subcover};
use coverlab::xreal::expr::{eval_str, output_digits, EvalError};
use coverlab::xreal::{ceil_u64, decimal_string, format_interval, int, parse_rat, RInterval, Rat};
use coverlab::{FiniteCoverSpace, Limits, SpaceError, Subset};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One named check. A failing report always carries a witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub timing_ms: f64,
}

impl Report {
    /// `witness` is `None` exactly when the check passed.
    fn from_witness(check: &str, started: Instant, witness: Option<Value>) -> Report {
        Report {
            check: check.to_string(),
            verdict: if witness.is_none() { Verdict::Pass } else { Verdict::Fail },
            witness,
            timing_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }

    /// A boolean check; on failure `explain` supplies the witness.
    fn from_bool(check: &str, started: Instant, ok: bool, explain: impl FnOnce() -> Value) -> Report {
        Report::from_witness(check, started, if ok { None } else { Some(explain()) })
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Output of a command: the JSON document to print and the overall verdict.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Value,
    pub passed: bool,
}

impl Outcome {
    fn from_reports(mut document: Value, reports: Vec<Report>) -> Outcome {
        let passed = reports.iter().all(Report::passed);
        document["reports"] = serde_json::to_value(&reports).expect("reports serialize");
        Outcome { document, passed }
    }
}

/// Errors that map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("parse error: {0}")]
    File(#[from] SpaceFileError),
    #[error("{0}")]
    Space(#[from] SpaceError),
    #[error("{0}")]
    Expr(#[from] EvalError),
    #[error("{0}")]
    Usage(String),
}

fn sub(s: Subset) -> Value {
    serde_json::from_str(&subset_json(s)).expect("subset json")
}

fn space_json(s: &FiniteCoverSpace) -> Value {
    serde_json::from_str(&SpaceFile::of_space(s).emit()).expect("emitted file is json")
}

pub fn load(text: &str) -> Result<FiniteCoverSpace, UsageError> {
    Ok(SpaceFile::parse(text)?.space())
}

/// The axiom checks on the space a file generates.
pub fn axiom_reports(s: &FiniteCoverSpace) -> Vec<Report> {
    let mut out = Vec::new();
    let t = Instant::now();
    out.push(Report::from_witness("covers valid", t, None));
    let t = Instant::now();
    out.push(Report::from_witness("CR", t, cr_witness(s).map(|w| json!({ "member": sub(w) }))));
    let t = Instant::now();
    out.push(Report::from_witness(
        "strong regularity",
        t,
        strong_regularity_witness(s).map(|w| json!({ "member": sub(w) })),
    ));
    let t = Instant::now();
    out.push(Report::from_witness("separated", t, separation_witness(s).map(|(x, y)| json!([x, y]))));
    let t = Instant::now();
    out.push(Report::from_witness("complete", t, completeness_witness(s).map(|b| json!({ "filter_base": sub(b) }))));
    let t = Instant::now();
    out.push(Report::from_bool("proper", t, is_proper(s), || json!({ "member": [] })));
    out
}

pub fn cmd_axioms(text: &str) -> Result<Outcome, UsageError> {
    let s = load(text)?;
    Ok(Outcome::from_reports(json!({ "command": "axioms", "generator": space_json(&s) }), axiom_reports(&s)))
}

/// `(reflected space, whether reflection changed anything)`.
fn regular_input(s: &FiniteCoverSpace, limits: &Limits) -> Result<(FiniteCoverSpace, bool), UsageError> {
    if satisfies_cr(s) {
        Ok((s.clone(), false))
    } else {
        Ok((regular_reflection(s, limits)?, true))
    }
}

pub fn cmd_reflect(text: &str, limits: &Limits) -> Result<Outcome, UsageError> {
    let s = load(text)?;
    let (r, changed) = regular_input(&s, limits)?;
    let t = Instant::now();
    let reports = vec![Report::from_bool("reflection satisfies CR", t, satisfies_cr(&r), || {
        json!({ "member": cr_witness(&r).map(sub) })
    })];
    Ok(Outcome::from_reports(json!({ "command": "reflect", "changed": changed, "space": space_json(&r) }), reports))
}

fn completion_json(c: &CompletionSpace) -> Value {
    json!({
        "space": space_json(c.space()),
        "points": c.points().iter().map(|p| sub(p.base())).collect::<Vec<_>>(),
        "unit": c.unit().values(),
    })
}

/// Completes the regular reflection of the file's space. Reports the
/// construction's postconditions and that completing again changes nothing
/// up to isomorphism.
pub fn cmd_complete(text: &str, limits: &Limits) -> Result<Outcome, UsageError> {
    let s = load(text)?;
    let (r, reflected) = regular_input(&s, limits)?;
    let c = completion(&r, limits)?;
    let mut reports = Vec::new();
    for (name, ok) in c.checks(&r) {
        let t = Instant::now();
        reports.push(Report::from_bool(name, t, ok, || json!({ "unit": c.unit().values() })));
    }
    let t = Instant::now();
    let again = completion(c.space(), limits)?;
    let iso = find_isomorphism(c.space(), again.space());
    reports.push(Report::from_bool("idempotent", t, iso.is_some(), || {
        json!({ "completion": space_json(c.space()), "completion of completion": space_json(again.space()) })
    }));
    let doc = json!({
        "command": "complete",
        "reflected": reflected,
        "input": space_json(&r),
        "completion": completion_json(&c),
    });
    Ok(Outcome::from_reports(doc, reports))
}

fn frame_json(m: &FiniteLocale, n: usize) -> Value {
    let elements: Vec<Value> = (0..m.size())
        .map(|a| match m.ideal(a) {
            Some(i) => json!(i.members(n).into_iter().map(sub).collect::<Vec<_>>()),
            None => Value::Null,
        })
        .collect();
    let order: Vec<Vec<usize>> = (0..m.size()).map(|a| (0..m.size()).filter(|&b| m.leq(a, b)).collect()).collect();
    json!({ "size": m.size(), "bottom": m.bottom(), "top": m.top(), "elements": elements, "above": order })
}

pub fn cmd_locale_build(text: &str, limits: &Limits) -> Result<Outcome, UsageError> {
    let s = load(text)?;
    let m = build_l(&s, limits)?;
    let t = Instant::now();
    let mut reports = vec![Report::from_witness(
        "distributive",
        t,
        m.distributivity_witness().map(|(a, b, c)| json!([a, b, c])),
    )];
    let t = Instant::now();
    reports.push(Report::from_bool("regular", t, m.is_regular(), || {
        let bad: Vec<usize> = (0..m.size())
            .filter(|&a| m.join_all((0..m.size()).filter(|&b| m.rather_below(b, a))) != a)
            .collect();
        json!({ "elements": bad })
    }));
    let t = Instant::now();
    reports.push(Report::from_bool("proper", t, m.is_proper(), || json!({ "element": m.bottom() })));
    Ok(Outcome::from_reports(json!({ "command": "locale build", "frame": frame_json(&m, s.n()) }), reports))
}

pub fn cmd_locale_points(text: &str, limits: &Limits) -> Result<Outcome, UsageError> {
    let s = load(text)?;
    let m = build_l(&s, limits)?;
    let pts: Vec<Value> = points(&m)
        .iter()
        .map(|p| {
            let ideal = m.ideal(p.prime).map(|i| i.members(s.n()).into_iter().map(sub).collect::<Vec<_>>());
            json!({ "prime": p.prime, "ideal": ideal })
        })
        .collect();
    let doc = json!({ "command": "locale points", "frame_size": m.size(), "points": pts });
    Ok(Outcome { document: doc, passed: true })
}

/// A precondition failure is reported, not raised: the verdict is fail and
/// the witness names the missing property.
pub fn cmd_locale_roundtrip(text: &str, limits: &Limits) -> Result<Outcome, UsageError> {
    let s = load(text)?;
    let t = Instant::now();
    match verify_equivalence(&s, limits) {
        Err(SpaceError::Precondition(msg)) => {
            let r = Report::from_witness("preconditions", t, Some(json!({ "reason": msg, "axioms": axiom_reports(&s) })));
            Ok(Outcome::from_reports(json!({ "command": "locale roundtrip" }), vec![r]))
        }
        Err(e) => Err(e.into()),
        Ok(rep) => {
            let eta = json!(rep.eta);
            let reports = rep
                .checks
                .iter()
                .map(|(name, ok)| Report::from_bool(name, t, *ok, || json!({ "eta": eta.clone() })))
                .collect();
            let doc = json!({
                "command": "locale roundtrip",
                "frame_size": rep.frame_size,
                "point_count": rep.point_count,
                "eta": rep.eta,
            });
            Ok(Outcome::from_reports(doc, reports))
        }
    }
}

pub fn parse_eps(s: &str) -> Result<Rat, UsageError> {
    let scientific = s.split_once(['e', 'E']).and_then(|(m, e)| {
        let k: i32 = e.parse().ok()?;
        let ten = int(10);
        let scale = if k >= 0 { ten.pow(k) } else { ten.pow(-k).recip() };
        Some(parse_rat(m)? * scale)
    });
    let eps = scientific.or_else(|| parse_rat(s)).ok_or_else(|| UsageError::Usage(format!("bad precision `{s}`")))?;
    if eps <= int(0) {
        return Err(UsageError::Usage("precision must be positive".into()));
    }
    Ok(eps)
}

/// `c ± r`, with the bounds in exact form alongside.
pub fn cmd_real_eval(expr: &str, eps: &Rat) -> Result<(String, RInterval), UsageError> {
    let i = eval_str(expr, eps)?;
    Ok((format_interval(&i, output_digits(eps)), i))
}

pub fn cmd_heine_borel(eps: &Rat) -> Result<Outcome, UsageError> {
    let unit = RInterval::new(int(0), int(1)).expect("unit interval");
    let t = Instant::now();
    let cover = ball_cover(eps).map_err(|e| UsageError::Usage(e.to_string()))?;
    let digits = output_digits(eps);
    let show = |i: &RInterval| json!([decimal_string(i.lo(), digits), decimal_string(i.hi(), digits)]);
    let mut reports = Vec::new();
    let doc = match finite_subcover(&unit, &cover) {
        Err(gap) => {
            reports.push(Report::from_witness("subcover found", t, Some(json!({ "uncovered": gap.to_string() }))));
            json!({ "command": "demo heine-borel", "cover_size": cover.len() })
        }
        Ok(sub) => {
            reports.push(Report::from_witness("subcover found", t, None));
            let bound = ceil_u64(&(int(1) / eps)) + 1;
            let t = Instant::now();
            reports.push(Report::from_bool("size within 1/eps + 1", t, sub.len() as u64 <= bound, || {
                json!({ "size": sub.len(), "bound": bound })
            }));
            let t = Instant::now();
            reports.push(Report::from_witness(
                "coverage certified",
                t,
                certify_coverage(&unit, &sub).err().map(|p| json!({ "uncovered": p.to_string() })),
            ));
            json!({
                "command": "demo heine-borel",
                "cover_size": cover.len(),
                "subcover": sub.iter().map(show).collect::<Vec<_>>(),
            })
        }
    };
    Ok(Outcome::from_reports(doc, reports))
}
