//! Line-oriented instance format.
//!
//! ```text
//! # anything after '#' is ignored
//! name cyclic:4          (optional)
//! order 4
//! iota 2
//! row 0 1 2 3            (one per group element, in order)
//! row 1 2 3 0
//! row 2 3 0 1
//! row 3 0 1 2
//! factor 0               (subgroup elements; one line per CM-field factor)
//! cmtype 0 1             (points of the embedding set)
//! degrees all            (optional; or a list such as "degrees 0 2")
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cm::{validate_cm_type, CmError, CmType};
use crate::error::{Error, Result};
use crate::group::{build_group, embedding_set, EmbeddingSet, GroupTable};
use crate::points::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Degrees {
    All,
    List(Vec<usize>),
}

impl Degrees {
    /// Concrete degrees for an embedding set of size `m`, sorted and
    /// deduplicated. Degrees above `m/2` are kept; they have no monomials.
    pub fn resolve(&self, m: usize) -> Vec<usize> {
        match self {
            Degrees::All => (0..=m / 2).collect(),
            Degrees::List(ps) => {
                let mut v = ps.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }
}

impl std::str::FromStr for Degrees {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "all" {
            return Ok(Degrees::All);
        }
        s.split([',', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| format!("bad degree {t:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Degrees::List)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub iota: usize,
    pub table: Vec<Vec<usize>>,
    pub factors: Vec<Vec<usize>>,
    pub cm_type: Vec<usize>,
    #[serde(skip)]
    pub degrees: Degrees,
}

impl Default for Degrees {
    fn default() -> Self {
        Degrees::All
    }
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub group: Arc<GroupTable>,
    pub carrier: Arc<EmbeddingSet>,
    pub phi: CmType,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance> {
        let group = Arc::new(build_group(self.order, &self.table, self.iota)?);
        let carrier = Arc::new(embedding_set(&group, &self.factors)?);
        if let Some(&point) = self.cm_type.iter().find(|&&s| s >= carrier.len()) {
            return Err(CmError::PointOutOfRange {
                point,
                size: carrier.len(),
            }
            .into());
        }
        let mut sorted = self.cm_type.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.cm_type.len() {
            return Err(Error::Parse {
                line: 0,
                message: "cmtype lists a point twice".into(),
            });
        }
        let phi = validate_cm_type(&carrier, PointSet::from_indices(sorted))?;
        Ok(Instance {
            spec: self.clone(),
            group,
            carrier,
            phi,
        })
    }

    /// Renders the instance in the text format read by [`parse_instance`].
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| {
            v.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        if let Some(name) = &self.name {
            writeln!(out, "name {name}").unwrap();
        }
        writeln!(out, "order {}", self.order).unwrap();
        writeln!(out, "iota {}", self.iota).unwrap();
        for row in &self.table {
            writeln!(out, "row {}", join(row)).unwrap();
        }
        for f in &self.factors {
            writeln!(out, "factor {}", join(f)).unwrap();
        }
        writeln!(out, "cmtype {}", join(&self.cm_type)).unwrap();
        match &self.degrees {
            Degrees::All => writeln!(out, "degrees all").unwrap(),
            Degrees::List(ps) => writeln!(out, "degrees {}", join(ps)).unwrap(),
        }
        out
    }
}

fn numbers(line: usize, field: &str, rest: &[&str]) -> Result<Vec<usize>> {
    rest.iter()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("{field}: expected a non-negative integer, got {t:?}"),
            })
        })
        .collect()
}

fn single(line: usize, field: &str, rest: &[&str]) -> Result<usize> {
    match numbers(line, field, rest)?.as_slice() {
        [v] => Ok(*v),
        _ => Err(Error::Parse {
            line,
            message: format!("{field}: expected exactly one integer"),
        }),
    }
}

/// Parses the text format without validating the mathematics.
pub fn parse_instance_text(text: &str) -> Result<InstanceSpec> {
    let mut name = None;
    let mut order = None;
    let mut iota = None;
    let mut table = Vec::new();
    let mut factors = Vec::new();
    let mut cm_type = None;
    let mut degrees = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let (key, rest) = (tokens[0], &tokens[1..]);
        let dup = |what: &str| Error::Parse {
            line,
            message: format!("duplicate {what} line"),
        };
        match key {
            "name" => {
                if name.is_some() {
                    return Err(dup("name"));
                }
                name = Some(rest.join(" "));
            }
            "order" => {
                if order.replace(single(line, "order", rest)?).is_some() {
                    return Err(dup("order"));
                }
            }
            "iota" => {
                if iota.replace(single(line, "iota", rest)?).is_some() {
                    return Err(dup("iota"));
                }
            }
            "row" => table.push(numbers(line, "row", rest)?),
            "factor" => factors.push(numbers(line, "factor", rest)?),
            "cmtype" => {
                if cm_type.replace(numbers(line, "cmtype", rest)?).is_some() {
                    return Err(dup("cmtype"));
                }
            }
            "degrees" => {
                let d: Degrees = rest.join(" ").parse().map_err(|message| Error::Parse { line, message })?;
                if degrees.replace(d).is_some() {
                    return Err(dup("degrees"));
                }
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown field {other:?}"),
                })
            }
        }
    }

    let missing = |what: &str| Error::Parse {
        line: 0,
        message: format!("missing {what} line"),
    };
    let order = order.ok_or_else(|| missing("order"))?;
    let iota = iota.ok_or_else(|| missing("iota"))?;
    let cm_type = cm_type.ok_or_else(|| missing("cmtype"))?;
    if factors.is_empty() {
        return Err(missing("factor"));
    }
    Ok(InstanceSpec {
        name,
        order,
        iota,
        table,
        factors,
        cm_type,
        degrees: degrees.unwrap_or_default(),
    })
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_text(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupError, InvolutionDefect};

    const ELLIPTIC: &str = "\
# CM elliptic curve
order 2
iota 1
row 0 1
row 1 0
factor 0
cmtype 0
";

    #[test]
    fn minimal_instance() {
        let inst = parse_instance(ELLIPTIC).unwrap();
        assert_eq!(inst.carrier.len(), 2);
        assert_eq!(inst.spec.degrees, Degrees::All);
        assert_eq!(inst.phi.members(), PointSet::from_indices([0]));
    }

    #[test]
    fn non_central_iota_is_reported() {
        // S3 as permutations of {0,1,2}; element 1 is a transposition.
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let index = |q: [usize; 3]| perms.iter().position(|&x| x == q).unwrap();
        let mut s3 = String::from("order 6\niota 1\n");
        for a in &perms {
            let row: Vec<String> = perms
                .iter()
                .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]).to_string())
                .collect();
            s3.push_str(&format!("row {}\n", row.join(" ")));
        }
        s3.push_str("factor 0\ncmtype 0 1 2\n");
        let s3 = s3.as_str();
        let err = parse_instance(s3).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Group(GroupError::BadInvolution {
                    reason: InvolutionDefect::NotCentral { .. },
                    ..
                })
            ),
            "{err}"
        );
    }

    #[test]
    fn conjugate_pair_is_not_a_cm_type() {
        let text = ELLIPTIC.replace("cmtype 0", "cmtype 0 1");
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(err, Error::Cm(CmError::NotACmType { .. })), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = ELLIPTIC.replace("iota 1", "iota x");
        match parse_instance(&text).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
        let text = ELLIPTIC.replace("row 1 0", "bogus 1 0");
        assert!(matches!(parse_instance(&text), Err(Error::Parse { line: 5, .. })));
        let text = ELLIPTIC.replace("cmtype 0\n", "");
        assert!(matches!(parse_instance(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn text_round_trip() {
        let mut spec = parse_instance_text(ELLIPTIC).unwrap();
        spec.name = Some("cyclic:2".into());
        spec.degrees = Degrees::List(vec![0, 1]);
        assert_eq!(parse_instance_text(&spec.to_text()).unwrap(), spec);
    }

    #[test]
    fn degrees_parse() {
        assert_eq!("all".parse::<Degrees>().unwrap(), Degrees::All);
        assert_eq!("2".parse::<Degrees>().unwrap(), Degrees::List(vec![2]));
        assert_eq!("0,2".parse::<Degrees>().unwrap(), Degrees::List(vec![0, 2]));
        assert!("x".parse::<Degrees>().is_err());
        assert_eq!(Degrees::All.resolve(6), vec![0, 1, 2, 3]);
    }
}
