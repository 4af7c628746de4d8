//! Plain-text curve files.
//!
//! ```text
//! # comment
//! name my-quintic
//! prime 1000003        (optional)
//! degree 5
//! gonality plane(5)
//! term 5 0 0 1         x^5 with coefficient 1
//! term 0 4 1 -3
//! sing 0 0 2           node at (0, 0) in the chart z = 1
//! ```
//!
//! Coefficients are decimal integers, reduced modulo the prime.

use std::path::Path;

use wahl_core::curvemodel::{Gonality, PlaneCurve, SingularPoint};
use wahl_core::exactcore::{Poly, PrimeField};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveFile {
    pub name: String,
    pub prime: Option<u64>,
    pub degree: usize,
    pub gonality: Option<String>,
    /// `(i, j, k, coefficient)` for `x^i y^j z^k`.
    pub terms: Vec<(u16, u16, u16, String)>,
    pub singular: Vec<(String, String, usize)>,
}

impl CurveFile {
    pub fn parse(text: &str, path: &str) -> CliResult<Self> {
        let err = |line: usize, msg: String| CliError::Parse {
            path: path.to_string(),
            line,
            msg,
        };
        let mut out = CurveFile::default();
        let mut saw_degree = false;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let num = |s: &str| s.parse::<u64>().map_err(|e| err(line, format!("{s:?}: {e}")));
            match (fields[0], fields.len()) {
                ("name", 2) => out.name = fields[1].to_string(),
                ("prime", 2) => out.prime = Some(num(fields[1])?),
                ("degree", 2) => {
                    out.degree = num(fields[1])? as usize;
                    saw_degree = true;
                }
                ("gonality", 2) => out.gonality = Some(fields[1].to_string()),
                ("term", 5) => {
                    let e: Vec<u16> = fields[1..4]
                        .iter()
                        .map(|s| s.parse::<u16>().map_err(|e| err(line, format!("exponent {s:?}: {e}"))))
                        .collect::<CliResult<_>>()?;
                    out.terms.push((e[0], e[1], e[2], fields[4].to_string()));
                }
                ("sing", 4) => {
                    out.singular
                        .push((fields[1].to_string(), fields[2].to_string(), num(fields[3])? as usize))
                }
                (key, k) => return Err(err(line, format!("unexpected {key:?} with {} fields", k - 1))),
            }
        }
        if !saw_degree {
            return Err(err(0, "missing degree".into()));
        }
        if out.terms.is_empty() {
            return Err(err(0, "no terms".into()));
        }
        for (i, j, k, _) in &out.terms {
            if (*i + *j + *k) as usize != out.degree {
                return Err(err(
                    0,
                    format!("term x^{i} y^{j} z^{k} is not of degree {}", out.degree),
                ));
            }
        }
        if out.name.is_empty() {
            out.name = path.to_string();
        }
        Ok(out)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn gonality(&self) -> CliResult<Gonality> {
        match &self.gonality {
            None => Ok(Gonality::Unknown),
            Some(s) => s.parse().map_err(|e| CliError::Parse {
                path: self.name.clone(),
                line: 0,
                msg: format!("gonality {s:?}: {e}"),
            }),
        }
    }

    /// Builds the curve over `field` (which should be the file's prime when
    /// it declares one).
    pub fn to_curve(&self, field: PrimeField) -> CliResult<PlaneCurve> {
        let bad = |s: &str| CliError::Parse {
            path: self.name.clone(),
            line: 0,
            msg: format!("not an integer: {s:?}"),
        };
        let mut f = Poly::zero(field, 3);
        for (i, j, k, c) in &self.terms {
            let c = field.parse_decimal(c).ok_or_else(|| bad(c))?;
            f.add_term(vec![*i, *j, *k], c);
        }
        let sing = self
            .singular
            .iter()
            .map(|(x, y, m)| {
                Ok(SingularPoint {
                    x: field.parse_decimal(x).ok_or_else(|| bad(x))?,
                    y: field.parse_decimal(y).ok_or_else(|| bad(y))?,
                    m: *m,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(PlaneCurve::new(self.name.clone(), f, sing, self.gonality()?)?)
    }

    /// Serializes a curve in the same format.
    pub fn render(c: &PlaneCurve) -> String {
        let mut s = format!(
            "name {}\nprime {}\ndegree {}\ngonality {}\n",
            c.name(),
            c.field().modulus(),
            c.degree(),
            c.gonality()
        );
        for (e, v) in c.equation().terms() {
            s.push_str(&format!("term {} {} {} {}\n", e[0], e[1], e[2], v));
        }
        for p in c.singular_points() {
            s.push_str(&format!("sing {} {} {}\n", p.x, p.y, p.m));
        }
        s
    }
}

/// A cubic given as `term i j k coeff` lines.
pub fn parse_cubic(text: &str, path: &str, field: PrimeField) -> CliResult<Poly> {
    let mut f = Poly::zero(field, 3);
    for (n, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Parse {
            path: path.to_string(),
            line: n + 1,
            msg,
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "term" {
            return Err(err(format!("expected `term i j k coeff`, got {content:?}")));
        }
        let e: Vec<u16> = fields[1..4]
            .iter()
            .map(|s| s.parse().map_err(|e| err(format!("exponent {s:?}: {e}"))))
            .collect::<CliResult<_>>()?;
        if e.iter().sum::<u16>() != 3 {
            return Err(err("cubic terms must have degree 3".into()));
        }
        let c = field
            .parse_decimal(fields[4])
            .ok_or_else(|| err(format!("not an integer: {:?}", fields[4])))?;
        f.add_term(e, c);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODAL_CUBIC: &str = "\
name nodal-cubic
prime 1000003
degree 3
gonality unknown
# y^2 z = x^3 + x^2 z
term 0 2 1 1
term 3 0 0 -1
term 2 0 1 -1
sing 0 0 2
";

    #[test]
    fn parses_and_builds() {
        let cf = CurveFile::parse(NODAL_CUBIC, "mem").unwrap();
        assert_eq!(cf.prime, Some(1_000_003));
        assert_eq!(cf.terms.len(), 3);
        let c = cf.to_curve(PrimeField::new(1_000_003).unwrap()).unwrap();
        assert_eq!(c.genus(), 0);
    }

    #[test]
    fn round_trip() {
        let field = PrimeField::new(1_000_003).unwrap();
        let c = CurveFile::parse(NODAL_CUBIC, "mem").unwrap().to_curve(field).unwrap();
        let again = CurveFile::parse(&CurveFile::render(&c), "mem")
            .unwrap()
            .to_curve(field)
            .unwrap();
        assert_eq!(c.equation(), again.equation());
        assert_eq!(c.singular_points(), again.singular_points());
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "degree 3\nterm 1 1 x 4\n";
        match CurveFile::parse(bad, "f.curve") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_degree_term() {
        assert!(CurveFile::parse("degree 3\nterm 1 1 0 4\n", "f").is_err());
    }

    #[test]
    fn declared_singularity_checked() {
        let text = NODAL_CUBIC.replace("sing 0 0 2", "sing 1 0 2");
        let cf = CurveFile::parse(&text, "mem").unwrap();
        assert!(cf.to_curve(PrimeField::new(1_000_003).unwrap()).is_err());
    }
}
