//! LaTeX and plain-text rendering of plans, series and kernel vectors.

use num_traits::{One, Signed};

use crate::algebra::{ExtMonomial, Rational, Series};
use crate::oracle::PBWVector;
use crate::singular::{ExponentPlan, SolutionRecord};

pub fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else if r.is_negative() {
        format!("-\\frac{{{}}}{{{}}}", -r.numer(), r.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn exponent_string(e: &Rational) -> String {
    e.to_string()
}

pub fn latex_monomial(m: &ExtMonomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let mut out = String::new();
    for (v, e) in m.iter() {
        if e.is_one() {
            out.push_str(&format!("x_{{{},{}}}", v.row, v.col));
        } else {
            out.push_str(&format!(
                "x_{{{},{}}}^{{{}}}",
                v.row,
                v.col,
                exponent_string(e)
            ));
        }
    }
    out
}

pub fn latex_series(s: &Series) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in s.iter().enumerate() {
        let (sign, abs) = if c.is_negative() {
            ("-", -c.clone())
        } else {
            ("+", c.clone())
        };
        if k == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if abs.is_one() && !m.is_one() {
            out.push_str(&latex_monomial(m));
        } else if m.is_one() {
            out.push_str(&latex_rational(&abs));
        } else {
            out.push_str(&format!("{}\\,{}", latex_rational(&abs), latex_monomial(m)));
        }
    }
    if s.is_truncated() {
        out.push_str(&format!(" + O(\\mathrm{{depth}}\\,{})", s.depth_used()));
    }
    out
}

/// Operator-order product: the last step of the plan is leftmost.
pub fn latex_plan(plan: &ExponentPlan) -> String {
    if plan.is_empty() {
        return "1".to_string();
    }
    let mut out = String::new();
    for (root, exp) in plan.steps().iter().rev() {
        if exp.is_one() {
            out.push_str(&format!("\\eta_{{{root}}}"));
        } else {
            out.push_str(&format!("\\eta_{{{root}}}^{{{}}}", exponent_string(exp)));
        }
    }
    out.push_str("(1)");
    out
}

pub fn latex_pbw_vector(v: &PBWVector) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (alpha, c)) in v.iter().enumerate() {
        let (sign, abs) = if c.is_negative() {
            ("-", -c.clone())
        } else {
            ("+", c.clone())
        };
        if k == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if !abs.is_one() {
            out.push_str(&format!("{}\\,", latex_rational(&abs)));
        }
        for (v, e) in alpha.iter() {
            if *e == 1 {
                out.push_str(&format!("E_{{{},{}}}", v.row, v.col));
            } else {
                out.push_str(&format!("E_{{{},{}}}^{{{e}}}", v.row, v.col));
            }
        }
        out.push_str("v_\\lambda");
    }
    out
}

pub fn latex_record(rec: &SolutionRecord) -> String {
    let idx = match &rec.index {
        Some(i) => format!("\\theta_{{{i}}}"),
        None => "\\varphi".to_string(),
    };
    format!(
        "{idx} = {} = {}",
        latex_plan(&rec.plan),
        latex_series(&rec.series)
    )
}

pub fn text_record(rec: &SolutionRecord) -> String {
    let idx = match &rec.index {
        Some(i) => format!("theta_{i}"),
        None => "phi".to_string(),
    };
    let weight = rec
        .weight
        .iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{idx}: plan {} | polynomial {} | exact {} | weight ({weight})\n  {}",
        rec.plan,
        rec.polynomial.as_str(),
        rec.exact,
        rec.series
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio, VarIndex};

    #[test]
    fn rational_rendering() {
        assert_eq!(latex_rational(&rat(3)), "3");
        assert_eq!(latex_rational(&ratio(-7, 2)), "-\\frac{7}{2}");
    }

    #[test]
    fn plan_rendering_reverses_steps() {
        let plan = ExponentPlan::new(vec![(1, rat(3)), (2, rat(5)), (1, rat(2))]).unwrap();
        assert_eq!(
            latex_plan(&plan),
            "\\eta_{1}^{2}\\eta_{2}^{5}\\eta_{1}^{3}(1)"
        );
    }

    #[test]
    fn series_rendering() {
        // canonical order puts the x21-free monomial first
        let mut s = Series::zero();
        s.add_term(ExtMonomial::var_pow(VarIndex::new(2, 1), ratio(7, 2)), rat(1));
        s.add_term(ExtMonomial::var_pow(VarIndex::new(3, 2), rat(2)), rat(-3));
        assert_eq!(latex_series(&s), "-3\\,x_{3,2}^{2} + x_{2,1}^{7/2}");
    }
}
