//! Canonical JSON encodings.
//!
//! Terms serialize as `{"coeff": "p/q", "exps": [{"i":…,"j":…,"e":"p/q"}]}`
//! with coefficients and exponents always exact fraction strings, never
//! floats.  Solution records carry their index vector, plan, verdicts,
//! weight and terms; kernel vectors serialize as `{alpha, coeff}` lists.

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, rational_to_string, ExtMonomial, Rational, Series, VarIndex};
use crate::operators::Weight;
use crate::oracle::{MultiIndex, PBWVector, WeightDrop};
use crate::singular::{
    ExponentPlan, IndexVector, IrreducibilityReport, PolyVerdict, SolutionRecord,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpJson {
    pub i: u32,
    pub j: u32,
    pub e: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<ExpJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    pub index: Option<Vec<usize>>,
    pub plan: Vec<(usize, String)>,
    pub polynomial: String,
    pub exact: bool,
    pub weight: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnumerationJson {
    pub n: usize,
    pub weight: Vec<String>,
    pub depth: u32,
    pub records: Vec<RecordJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelTermJson {
    pub alpha: Vec<ExpJson>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleJson {
    pub n: usize,
    pub weight: Vec<String>,
    pub drop: Vec<u32>,
    pub dimension: usize,
    pub basis: Vec<Vec<KernelTermJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentJson {
    pub start: usize,
    pub end: usize,
    pub value: String,
    pub positive_integer: bool,
    pub natural: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IrreducibleJson {
    pub n: usize,
    pub weight: Vec<String>,
    pub irreducible: bool,
    pub irreducible_natural_reading: bool,
    pub readings_diverge: bool,
    pub segments: Vec<SegmentJson>,
}

pub fn term_to_json(m: &ExtMonomial, c: &Rational) -> TermJson {
    TermJson {
        coeff: rational_to_string(c),
        exps: m
            .iter()
            .map(|(v, e)| ExpJson {
                i: v.row,
                j: v.col,
                e: rational_to_string(e),
            })
            .collect(),
    }
}

pub fn series_to_json(s: &Series) -> Vec<TermJson> {
    s.iter().map(|(m, c)| term_to_json(m, c)).collect()
}

pub fn series_from_json(terms: &[TermJson]) -> Result<Series> {
    let mut s = Series::zero();
    for t in terms {
        let c = parse_rational(&t.coeff)?;
        let mut m = ExtMonomial::one();
        for e in &t.exps {
            if e.j < 1 || e.j >= e.i {
                return Err(Error::Parse(format!("invalid variable x_{{{},{}}}", e.i, e.j)));
            }
            m.set_exponent(VarIndex::new(e.i, e.j), parse_rational(&e.e)?);
        }
        s.add_term(m, c);
    }
    Ok(s)
}

pub fn record_to_json(rec: &SolutionRecord) -> RecordJson {
    RecordJson {
        index: rec.index.as_ref().map(|i| i.entries().to_vec()),
        plan: rec
            .plan
            .steps()
            .iter()
            .map(|(r, e)| (*r, rational_to_string(e)))
            .collect(),
        polynomial: rec.polynomial.as_str().to_string(),
        exact: rec.exact,
        weight: rec.weight.iter().map(rational_to_string).collect(),
        terms: series_to_json(&rec.series),
    }
}

pub fn record_from_json(json: &RecordJson) -> Result<SolutionRecord> {
    let index = match &json.index {
        None => None,
        Some(v) => Some(IndexVector::new(v.clone())?),
    };
    let mut steps = Vec::with_capacity(json.plan.len());
    for (root, exp) in &json.plan {
        steps.push((*root, parse_rational(exp)?));
    }
    let plan = ExponentPlan::new(steps)?;
    let polynomial = match json.polynomial.as_str() {
        "yes" => PolyVerdict::Yes,
        "no" => PolyVerdict::No,
        "unknown" => PolyVerdict::Unknown,
        other => return Err(Error::Parse(format!("bad verdict {other:?}"))),
    };
    let weight = json
        .weight
        .iter()
        .map(|w| parse_rational(w))
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionRecord {
        index,
        plan,
        series: series_from_json(&json.terms)?,
        polynomial,
        exact: json.exact,
        weight,
        normalized: true,
    })
}

pub fn enumeration_to_json(
    lam: &Weight,
    depth: u32,
    records: &[SolutionRecord],
) -> EnumerationJson {
    EnumerationJson {
        n: lam.n(),
        weight: lam.entries().iter().map(rational_to_string).collect(),
        depth,
        records: records.iter().map(record_to_json).collect(),
    }
}

pub fn weight_from_json(n: usize, entries: &[String]) -> Result<Weight> {
    let lambda = entries
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    Weight::new(n, lambda)
}

pub fn kernel_vector_to_json(v: &PBWVector) -> Vec<KernelTermJson> {
    v.iter()
        .map(|(alpha, c)| KernelTermJson {
            alpha: alpha
                .iter()
                .map(|(v, e)| ExpJson {
                    i: v.row,
                    j: v.col,
                    e: e.to_string(),
                })
                .collect(),
            coeff: rational_to_string(c),
        })
        .collect()
}

pub fn kernel_vector_from_json(terms: &[KernelTermJson]) -> Result<PBWVector> {
    let mut v = PBWVector::zero();
    for t in terms {
        let c = parse_rational(&t.coeff)?;
        let mut alpha = MultiIndex::empty();
        for e in &t.alpha {
            let exp: u32 = e
                .e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {:?}", e.e)))?;
            alpha.set(VarIndex::new(e.i, e.j), exp);
        }
        v.add_term(alpha, c);
    }
    Ok(v)
}

pub fn oracle_to_json(lam: &Weight, drop: &WeightDrop, basis: &[PBWVector]) -> OracleJson {
    OracleJson {
        n: lam.n(),
        weight: lam.entries().iter().map(rational_to_string).collect(),
        drop: drop.entries().to_vec(),
        dimension: basis.len(),
        basis: basis.iter().map(kernel_vector_to_json).collect(),
    }
}

pub fn irreducible_to_json(lam: &Weight, report: &IrreducibilityReport) -> IrreducibleJson {
    IrreducibleJson {
        n: lam.n(),
        weight: lam.entries().iter().map(rational_to_string).collect(),
        irreducible: report.irreducible,
        irreducible_natural_reading: report.irreducible_natural_reading,
        readings_diverge: report.readings_diverge(),
        segments: report
            .segments
            .iter()
            .map(|s| SegmentJson {
                start: s.start,
                end: s.end,
                value: rational_to_string(&s.value),
                positive_integer: s.positive_integer,
                natural: s.natural,
            })
            .collect(),
    }
}
