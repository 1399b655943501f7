//! Built-in instances.
//!
//! An entry is a group expression followed by optional parameters:
//!
//! ```text
//! cyclic:8
//! elementary-abelian:8,iota=3
//! dihedral:8,sub=0.4
//! cyclic:4*cyclic:2,phi=0.1.2.3
//! quaternion:8,sub=0,sub=0
//! ```
//!
//! Groups: `cyclic:N` (N even), `elementary-abelian:N` (N a power of two),
//! `dihedral:N` (order N), `dicyclic:N` (order N divisible by 4),
//! `quaternion:8`, and direct products `A*B`. Parameters: `iota=K` picks the
//! central involution (default: the canonical one of the group), each
//! `sub=a.b.c` adds one factor given by subgroup elements (default: one
//! factor with the trivial subgroup, so `E` is the Galois closure itself),
//! and `phi=a.b.c` gives the CM-type (default: the smaller point of every
//! conjugate pair).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{build_group, embedding_set};
use crate::io::instance::{Degrees, InstanceSpec};

type Table = Vec<Vec<usize>>;

/// A group table with its canonical conjugation, if it has one.
struct BaseGroup {
    table: Table,
    iota: Option<usize>,
}

fn cyclic(n: usize) -> BaseGroup {
    BaseGroup {
        table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        iota: (n % 2 == 0).then_some(n / 2),
    }
}

fn elementary_abelian(n: usize) -> BaseGroup {
    BaseGroup {
        table: (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect(),
        iota: (n >= 2).then_some(n - 1),
    }
}

/// Order `2k`; `r^i s^j` has index `i + k*j`.
fn dihedral(order: usize) -> BaseGroup {
    let k = order / 2;
    let idx = |i: usize, j: usize| i % k + k * j;
    let mut table = vec![vec![0; order]; order];
    for a in 0..k {
        for x in 0..2 {
            for b in 0..k {
                for y in 0..2 {
                    let rot = if x == 0 { a + b } else { a + k - b };
                    table[idx(a, x)][idx(b, y)] = idx(rot, (x + y) % 2);
                }
            }
        }
    }
    BaseGroup {
        table,
        iota: (k % 2 == 0).then_some(k / 2),
    }
}

/// Order `4n`: `<a, x | a^(2n), x^2 = a^n, x a x^-1 = a^-1>`; `a^i x^j` has
/// index `i + 2n*j`.
fn dicyclic(order: usize) -> BaseGroup {
    let h = order / 2;
    let n = h / 2;
    let idx = |i: usize, j: usize| i % h + h * j;
    let mut table = vec![vec![0; order]; order];
    for i in 0..h {
        for j in 0..2 {
            for k in 0..h {
                for l in 0..2 {
                    let (rot, xs) = if j == 0 { (i + k, l) } else { (i + h - k, 1 + l) };
                    let (rot, xs) = if xs == 2 { (rot + n, 0) } else { (rot, xs) };
                    table[idx(i, j)][idx(k, l)] = idx(rot, xs);
                }
            }
        }
    }
    BaseGroup {
        table,
        iota: Some(n),
    }
}

fn direct_product(a: &BaseGroup, b: &BaseGroup) -> BaseGroup {
    let (na, nb) = (a.table.len(), b.table.len());
    let mut table = vec![vec![0; na * nb]; na * nb];
    for x1 in 0..na {
        for y1 in 0..nb {
            for x2 in 0..na {
                for y2 in 0..nb {
                    table[x1 * nb + y1][x2 * nb + y2] = a.table[x1][x2] * nb + b.table[y1][y2];
                }
            }
        }
    }
    let iota = match (a.iota, b.iota) {
        (Some(i), Some(j)) => Some(i * nb + j),
        (Some(i), None) => Some(i * nb),
        (None, Some(j)) => Some(j),
        (None, None) => None,
    };
    BaseGroup { table, iota }
}

fn parse_base(entry: &str) -> Result<BaseGroup> {
    let unknown = || Error::UnknownCatalogEntry(entry.to_string());
    let (name, param) = entry.split_once(':').ok_or_else(unknown)?;
    let n: usize = param
        .parse()
        .map_err(|_| Error::CatalogParams(format!("{entry}: order must be an integer")))?;
    let bad = |why: &str| Error::CatalogParams(format!("{entry}: {why}"));
    if n == 0 || n > 64 {
        return Err(bad("order must be between 1 and 64"));
    }
    match name {
        "cyclic" => Ok(cyclic(n)),
        "elementary-abelian" => {
            if !n.is_power_of_two() || n < 2 {
                return Err(bad("order must be a power of two"));
            }
            Ok(elementary_abelian(n))
        }
        "dihedral" => {
            if n % 2 != 0 || n < 4 {
                return Err(bad("order must be even and at least 4"));
            }
            Ok(dihedral(n))
        }
        "dicyclic" => {
            if n % 4 != 0 || n < 8 {
                return Err(bad("order must be a multiple of 4, at least 8"));
            }
            Ok(dicyclic(n))
        }
        "quaternion" => {
            if n != 8 {
                return Err(bad("only order 8 is available"));
            }
            Ok(dicyclic(8))
        }
        _ => Err(unknown()),
    }
}

fn dotted(entry: &str, value: &str) -> Result<Vec<usize>> {
    value
        .split('.')
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::CatalogParams(format!("{entry}: bad element list {value:?}")))
        })
        .collect()
}

/// Resolves a catalog entry to an instance specification.
pub fn catalog(entry: &str) -> Result<InstanceSpec> {
    let mut parts = entry.split(',');
    let group_expr = parts.next().unwrap_or("").trim();
    let mut group: Option<BaseGroup> = None;
    for factor in group_expr.split('*') {
        let base = parse_base(factor.trim())?;
        group = Some(match group {
            None => base,
            Some(acc) => direct_product(&acc, &base),
        });
    }
    let group = group.ok_or_else(|| Error::UnknownCatalogEntry(entry.to_string()))?;
    let order = group.table.len();
    if order > 64 {
        return Err(Error::CatalogParams(format!("{entry}: order {order} exceeds 64")));
    }

    let mut iota = group.iota;
    let mut subs = Vec::new();
    let mut phi = None;
    for param in parts {
        let (key, value) = param
            .split_once('=')
            .ok_or_else(|| Error::CatalogParams(format!("{entry}: expected key=value, got {param:?}")))?;
        match key.trim() {
            "iota" => {
                iota = Some(value.trim().parse().map_err(|_| {
                    Error::CatalogParams(format!("{entry}: bad iota {value:?}"))
                })?)
            }
            "sub" => subs.push(dotted(entry, value.trim())?),
            "phi" => phi = Some(dotted(entry, value.trim())?),
            other => {
                return Err(Error::CatalogParams(format!("{entry}: unknown parameter {other:?}")))
            }
        }
    }
    let iota = iota.ok_or_else(|| Error::NoCentralInvolution(group_expr.to_string()))?;
    if subs.is_empty() {
        subs.push(vec![0]);
    }

    let built = Arc::new(build_group(order, &group.table, iota)?);
    let cm_type = match phi {
        Some(p) => p,
        None => {
            let carrier = embedding_set(&built, &subs)?;
            carrier.conjugate_pairs().into_iter().map(|(lo, _)| lo).collect()
        }
    };
    Ok(InstanceSpec {
        name: Some(entry.to_string()),
        order,
        iota,
        table: group.table,
        factors: subs,
        cm_type,
        degrees: Degrees::All,
    })
}

/// Group expressions of every built-in group of order at most `max_order`
/// that has a central involution, one per isomorphism class.
pub fn groups_up_to(max_order: usize) -> Vec<&'static str> {
    const ALL: &[(usize, &str)] = &[
        (2, "cyclic:2"),
        (4, "cyclic:4"),
        (4, "elementary-abelian:4"),
        (6, "cyclic:6"),
        (8, "cyclic:8"),
        (8, "cyclic:4*cyclic:2"),
        (8, "elementary-abelian:8"),
        (8, "dihedral:8"),
        (8, "quaternion:8"),
        (10, "cyclic:10"),
        (12, "cyclic:12"),
        (12, "cyclic:6*cyclic:2"),
        (12, "dihedral:12"),
        (12, "dicyclic:12"),
    ];
    ALL.iter()
        .filter(|(n, _)| *n <= max_order)
        .map(|(_, name)| *name)
        .collect()
}

/// Short descriptions for `catalog` listings.
pub fn catalog_listing() -> Vec<(&'static str, &'static str)> {
    vec![
        ("cyclic:N", "cyclic group of even order N, iota = N/2"),
        ("elementary-abelian:N", "(Z/2)^k of order N = 2^k, iota = sum of the generators"),
        ("dihedral:N", "dihedral group of order N, iota = half-turn (N divisible by 4)"),
        ("dicyclic:N", "dicyclic group of order N divisible by 4, iota = the central involution"),
        ("quaternion:8", "quaternion group, iota = -1"),
        ("A*B", "direct product, iota = (iota_A, iota_B)"),
        (",iota=K", "choose a different central involution"),
        (",sub=a.b.c", "add a factor with the given subgroup (repeatable)"),
        (",phi=a.b.c", "choose the CM-type"),
    ]
}

/// Every single-factor instance (each central involution, each subgroup
/// avoiding it) and every two-factor instance with at most `max_points`
/// embeddings, over the groups of [`groups_up_to`]. CM-types are defaults;
/// callers sweep the rest with `enumerate_cm_types`.
pub fn sweep(max_order: usize, max_points: usize) -> Result<Vec<InstanceSpec>> {
    let mut out = Vec::new();
    for name in groups_up_to(max_order) {
        let base = catalog(name)?;
        let group = build_group(base.order, &base.table, base.iota)?;
        for iota in group.central_involutions() {
            let g = Arc::new(group.with_iota(iota)?);
            let subs: Vec<Vec<usize>> = g
                .subgroups()
                .into_iter()
                .filter(|h| !h.contains(&iota))
                .collect();
            let sizes: Vec<usize> = subs.iter().map(|h| g.order() / h.len()).collect();
            let mut choices: Vec<Vec<usize>> = Vec::new();
            for i in 0..subs.len() {
                if sizes[i] <= max_points {
                    choices.push(vec![i]);
                }
                for j in i..subs.len() {
                    if sizes[i] + sizes[j] <= max_points {
                        choices.push(vec![i, j]);
                    }
                }
            }
            for choice in choices {
                let mut entry = format!("{name},iota={iota}");
                for &k in &choice {
                    let elems: Vec<String> = subs[k].iter().map(usize::to_string).collect();
                    entry.push_str(&format!(",sub={}", elems.join(".")));
                }
                out.push(catalog(&entry)?);
            }
        }
    }
    Ok(out)
}
