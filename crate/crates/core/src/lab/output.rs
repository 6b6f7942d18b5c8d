//! CSV and JSON writers. Floats are rounded to 12 significant digits and
//! rationals are written as `"p/q"`, so equal inputs give equal bytes.

use serde_json::{json, Map, Value};

use super::{CompareReport, CompareRow, CountSummary, Prediction};
use crate::density_engine::rational::{format_rational, to_f64};
use crate::density_engine::{EmptyClass, PositivityVerdict};
use crate::galois_model::{ProbeReport, ProbeVerdict};

pub const COMPARE_HEADER: &str = "x,count,excluded,li,predicted_center,predicted_lo,predicted_hi,ratio,envelope";

pub fn round12(v: f64) -> f64 {
    format!("{v:.11e}").parse().unwrap_or(v)
}

fn csv_float(v: Option<f64>) -> String {
    match v {
        Some(v) if v.is_finite() => format!("{}", round12(v)),
        _ => "NA".into(),
    }
}

fn json_float(v: Option<f64>) -> Value {
    match v.filter(|v| v.is_finite()) {
        Some(v) => serde_json::Number::from_f64(round12(v)).map(Value::Number).unwrap_or(Value::Null),
        None => Value::String("NA".into()),
    }
}

pub fn count_csv(s: &CountSummary) -> String {
    let mut out = String::from("x,count,excluded\n");
    for r in &s.rows {
        out.push_str(&format!("{},{},{}\n", r.x, r.count, r.excluded));
    }
    out
}

pub fn count_json(s: &CountSummary) -> String {
    let mut text = serde_json::to_string_pretty(&json!({ "rows": s.rows })).unwrap();
    text.push('\n');
    text
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = format!("{COMPARE_HEADER}\n");
    for r in rows {
        let floats = [r.li, r.predicted_center, r.predicted_lo, r.predicted_hi, r.ratio, r.envelope];
        let cols: Vec<String> = floats.iter().map(|&v| csv_float(v)).collect();
        out.push_str(&format!("{},{},{},{}\n", r.x, r.count, r.excluded, cols.join(",")));
    }
    out
}

fn positivity_value(v: &PositivityVerdict) -> Value {
    match v {
        PositivityVerdict::Zero(EmptyClass::Prime(q)) => json!({ "verdict": "zero", "empty_at": q }),
        PositivityVerdict::Zero(EmptyClass::Condition) => json!({ "verdict": "zero", "empty_at": "condition" }),
        PositivityVerdict::Positive { lower_bound, prime_bound, tail_certified } => json!({
            "verdict": "positive",
            "lower_bound": format_rational(lower_bound),
            "lower_bound_approx": json_float(Some(to_f64(lower_bound))),
            "prime_bound": prime_bound,
            "tail_certified": tail_certified,
        }),
        PositivityVerdict::Inconclusive(reason) => json!({ "verdict": "inconclusive", "reason": reason }),
    }
}

fn probe_value(r: &ProbeReport) -> Value {
    let mut m = Map::new();
    m.insert("q".into(), json!(r.q));
    m.insert("sampled".into(), json!(r.sampled));
    m.insert("largest_prime".into(), json!(r.largest_prime));
    match &r.verdict {
        ProbeVerdict::ConsistentWithSurjective => {
            m.insert("verdict".into(), json!("consistent-with-surjective"));
        }
        ProbeVerdict::NonSurjective { missing } => {
            m.insert("verdict".into(), json!("non-surjective"));
            let missing: Vec<Value> = missing
                .iter()
                .map(|&(t, d, e)| json!({ "trace": t, "det": d, "expected": json_float(Some(e)) }))
                .collect();
            m.insert("missing".into(), Value::Array(missing));
        }
    }
    Value::Object(m)
}

fn prediction_value(p: &Prediction) -> Value {
    let iv = &p.interval;
    json!({
        "center": format_rational(&iv.center),
        "tail": format_rational(&iv.tail),
        "center_approx": json_float(Some(to_f64(&iv.center))),
        "lo_approx": json_float(Some(to_f64(&iv.lo()))),
        "hi_approx": json_float(Some(to_f64(&iv.hi()))),
        "truncation": iv.y,
        "tail_certified": iv.tail_certified,
        "multiplicative": p.multiplicative,
        "positivity": positivity_value(&p.positivity),
        "probes": p.probes.iter().map(probe_value).collect::<Vec<_>>(),
        "caveats": p.caveats,
    })
}

pub fn predict_json(p: &Prediction) -> String {
    let mut text = serde_json::to_string_pretty(&prediction_value(p)).unwrap();
    text.push('\n');
    text
}

pub fn compare_json(report: &CompareReport) -> String {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "x": r.x,
                "count": r.count,
                "excluded": r.excluded,
                "li": json_float(r.li),
                "predicted_center": json_float(r.predicted_center),
                "predicted_lo": json_float(r.predicted_lo),
                "predicted_hi": json_float(r.predicted_hi),
                "ratio": json_float(r.ratio),
                "envelope": json_float(r.envelope),
                "discrepancy": json_float(r.discrepancy),
            })
        })
        .collect();
    let mut text =
        serde_json::to_string_pretty(&json!({ "prediction": prediction_value(&report.prediction), "rows": rows })).unwrap();
    text.push('\n');
    text
}

pub fn probe_csv(reports: &[ProbeReport]) -> String {
    let mut out = String::from("q,sampled,largest_prime,verdict,missing\n");
    for r in reports {
        let (verdict, missing) = match &r.verdict {
            ProbeVerdict::ConsistentWithSurjective => ("consistent-with-surjective", String::new()),
            ProbeVerdict::NonSurjective { missing } => (
                "non-surjective",
                missing.iter().map(|(t, d, _)| format!("{t}:{d}")).collect::<Vec<_>>().join(" "),
            ),
        };
        out.push_str(&format!("{},{},{},{verdict},{missing}\n", r.q, r.sampled, r.largest_prime));
    }
    out
}

pub fn probe_json(reports: &[ProbeReport]) -> String {
    let mut text = serde_json::to_string_pretty(&reports.iter().map(probe_value).collect::<Vec<_>>()).unwrap();
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(78627.54902121), 78627.5490212);
        assert_eq!(csv_float(None), "NA");
        assert_eq!(csv_float(Some(2.5)), "2.5");
        assert_eq!(json_float(None), Value::String("NA".into()));
    }

    #[test]
    fn header_exact() {
        let csv = compare_csv(&[]);
        assert_eq!(csv, "x,count,excluded,li,predicted_center,predicted_lo,predicted_hi,ratio,envelope\n");
    }
}
