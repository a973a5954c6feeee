//! Browser bindings: the three interactive operations behind the demo
//! page (candidate enumeration, irreducibility report, oracle kernel).
//! Everything returns JSON strings; weights arrive as comma-separated
//! exact rationals, the same grammar the CLI uses.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use slverma::algebra::TruncationPolicy;
use slverma::json::{
    irreducible_to_json, oracle_to_json, record_to_json, weight_from_json, RecordJson,
};
use slverma::operators::Weight;
use slverma::oracle::{singular_kernel, WeightDrop};
use slverma::render::{latex_plan, latex_series};
use slverma::singular::{default_policy, enumerate_solutions, irreducible};

#[derive(Serialize)]
struct DemoRecord {
    #[serde(flatten)]
    record: RecordJson,
    plan_latex: String,
    series_latex: String,
}

#[derive(Serialize)]
struct DemoEnumeration {
    n: usize,
    weight: Vec<String>,
    depth: u32,
    records: Vec<DemoRecord>,
}

fn parse_weight(n: usize, weight_csv: &str) -> Result<Weight, JsValue> {
    let entries: Vec<String> = weight_csv.split(',').map(|s| s.trim().to_string()).collect();
    weight_from_json(n, &entries).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// All n! solution candidates for the weight, with LaTeX renderings.
#[wasm_bindgen]
pub fn enumerate(n: usize, weight_csv: &str, depth: Option<u32>) -> Result<String, JsValue> {
    let lam = parse_weight(n, weight_csv)?;
    let policy = match depth {
        Some(d) if d >= 1 => TruncationPolicy::new(d),
        Some(_) => return Err(JsValue::from_str("depth must be >= 1")),
        None => default_policy(&lam),
    };
    let records = enumerate_solutions(&lam, policy);
    let doc = DemoEnumeration {
        n,
        weight: lam.entries().iter().map(|w| w.to_string()).collect(),
        depth: policy.depth(),
        records: records
            .iter()
            .map(|rec| DemoRecord {
                record: record_to_json(rec),
                plan_latex: latex_plan(&rec.plan),
                series_latex: latex_series(&rec.series),
            })
            .collect(),
    };
    serde_json::to_string(&doc).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Segment-sum irreducibility report for the weight.
#[wasm_bindgen]
pub fn irreducibility(n: usize, weight_csv: &str) -> Result<String, JsValue> {
    let lam = parse_weight(n, weight_csv)?;
    let report = irreducible(&lam);
    serde_json::to_string(&irreducible_to_json(&lam, &report))
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Exact kernel basis of the raising operators at one weight drop.
#[wasm_bindgen]
pub fn kernel(n: usize, weight_csv: &str, drop_csv: &str) -> Result<String, JsValue> {
    let lam = parse_weight(n, weight_csv)?;
    let mut entries = Vec::new();
    for part in drop_csv.split(',') {
        let v: u32 = part
            .trim()
            .parse()
            .map_err(|_| JsValue::from_str(&format!("bad drop entry {part:?}")))?;
        entries.push(v);
    }
    if entries.len() != n - 1 {
        return Err(JsValue::from_str(&format!("drop needs {} entries", n - 1)));
    }
    let drop = WeightDrop::new(entries);
    let kernel = singular_kernel(&lam, &drop).map_err(|e| JsValue::from_str(&e.to_string()))?;
    serde_json::to_string(&oracle_to_json(&lam, &drop, &kernel))
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_json_shape() {
        let text = enumerate(3, "1,1", None).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["records"].as_array().unwrap().len(), 6);
        assert!(doc["records"][4]["plan_latex"]
            .as_str()
            .unwrap()
            .contains("\\eta"));
    }

    #[test]
    fn kernel_json_shape() {
        let text = kernel(2, "3", "4").unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["dimension"], 1);
    }

    #[test]
    fn irreducibility_json_shape() {
        let text = irreducibility(3, "1/3,1/3").unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["irreducible"], true);
    }
}
