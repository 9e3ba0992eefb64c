//! The table of toric Landau–Ginzburg models as data, with loaders and
//! cross-field validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{LatticePolytope, UnimodularMap};
use crate::laurent::{parse, LaurentPolynomial, Term};
use crate::links::{verify_link, Containment, LinkChecks, LinkReport, LinkType};
use crate::par::{self, Parallelism};
use crate::period::{period_sequence, support_modulus};

/// Current dataset schema version.
pub const SCHEMA_VERSION: u64 = 1;

/// Degree at or below which a smooth-point projection target carries a note.
pub const INDEX_TWO_THRESHOLD: u64 = 24;

const BUNDLED: &str = include_str!("../data/table.json");

/// Label `k.m`: Picard rank `k`, number `m` within that rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FanoLabel {
    pub rank: u8,
    pub number: u16,
}

impl FanoLabel {
    pub fn picard_rank(self) -> u8 {
        self.rank
    }

    /// Fano index, known for Picard rank one.
    pub fn index(self) -> Option<u8> {
        match (self.rank, self.number) {
            (1, 1..=10) => Some(1),
            (1, 11..=15) => Some(2),
            (1, 16) => Some(3),
            (1, 17) => Some(4),
            _ => None,
        }
    }

    /// Traditional name for Picard rank one (`X_22`, `V_5`, `Q`, `P^3`).
    pub fn classical_name(self) -> Option<String> {
        match (self.rank, self.number) {
            (1, n @ 1..=9) => Some(format!("X_{}", 2 * n)),
            // No smooth prime Fano threefold of genus 11.
            (1, 10) => Some("X_22".into()),
            (1, n @ 11..=15) => Some(format!("V_{}", n - 10)),
            (1, 16) => Some("Q".into()),
            (1, 17) => Some("P^3".into()),
            _ => None,
        }
    }
}

impl fmt::Display for FanoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.rank, self.number)
    }
}

impl FromStr for FanoLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once('.')
            .ok_or_else(|| format!("label {s:?} is not of the form k.m"))?;
        let rank: u8 = a.parse().map_err(|_| format!("bad rank in {s:?}"))?;
        let number: u16 = b.parse().map_err(|_| format!("bad number in {s:?}"))?;
        if rank == 0 || number == 0 {
            return Err(format!("label {s:?} must have positive parts"));
        }
        Ok(Self { rank, number })
    }
}

impl Serialize for FanoLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Change of variables attached to a row's incoming link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transform {
    None,
    /// Exponent map applied to the parent before comparing with this row.
    Matrix(UnimodularMap),
    /// A change of variables exists but is not recorded.
    Unknown,
}

impl Serialize for Transform {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Transform::None => s.serialize_none(),
            Transform::Matrix(u) => u.matrix().serialize(s),
            Transform::Unknown => s.serialize_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogRow {
    pub id: u32,
    pub fano_label: FanoLabel,
    pub degree: u64,
    pub parents: Vec<(u32, LinkType)>,
    pub descendants: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    #[serde(rename = "terms", serialize_with = "serialize_terms")]
    pub polynomial: LaurentPolynomial,
    pub transform: Transform,
    pub notes: String,
}

fn serialize_terms<S: Serializer>(
    p: &LaurentPolynomial,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    p.to_term_list().serialize(s)
}

impl CatalogRow {
    pub fn newton_polytope(&self) -> Result<LatticePolytope> {
        self.polynomial.newton_polytope()
    }

    /// `g = degree/2 + 1`.
    pub fn genus(&self) -> u64 {
        self.degree / 2 + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Catalog {
    schema_version: u64,
    rows: Vec<CatalogRow>,
}

impl Catalog {
    /// The dataset shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_json_str(BUNDLED).expect("bundled dataset is valid")
    }

    pub fn bundled_json() -> &'static str {
        BUNDLED
    }

    pub fn rows(&self) -> &[CatalogRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, id: u32) -> Result<&CatalogRow> {
        id.checked_sub(1)
            .and_then(|i| self.rows.get(i as usize))
            .ok_or(Error::UnknownRow(id))
    }

    /// All `(parent, child, type)` edges, ordered by child then parent.
    pub fn edges(&self) -> Vec<(u32, u32, LinkType)> {
        self.rows
            .iter()
            .flat_map(|r| r.parents.iter().map(move |&(p, t)| (p, r.id, t)))
            .collect()
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::schema(None, "<document>", format!("invalid JSON: {e}")))?;
        parse_catalog(&value)
    }
}

pub fn load_catalog(path: &Path) -> Result<Catalog> {
    let text = std::fs::read_to_string(path)?;
    Catalog::from_json_str(&text)
}

fn parse_catalog(v: &Value) -> Result<Catalog> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema(None, "<document>", "expected an object"))?;
    let version = obj
        .get("schema_version")
        .ok_or_else(|| Error::schema(None, "schema_version", "missing"))?
        .as_u64()
        .ok_or_else(|| Error::schema(None, "schema_version", "expected a non-negative integer"))?;
    if version != SCHEMA_VERSION {
        return Err(Error::schema(
            None,
            "schema_version",
            format!("unsupported version {version}, expected {SCHEMA_VERSION}"),
        ));
    }
    let raw_rows = obj
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema(None, "rows", "expected an array"))?;
    let mut rows = raw_rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_row(i, r))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.id);
    for (i, r) in rows.iter().enumerate() {
        if r.id as usize != i + 1 {
            return Err(Error::schema(
                Some(r.id),
                "id",
                format!(
                    "ids must be unique and run densely from 1; expected {}",
                    i + 1
                ),
            ));
        }
    }
    let n = rows.len() as u32;
    for r in &rows {
        for (p, _) in &r.parents {
            if *p == 0 || *p > n {
                return Err(Error::schema(
                    Some(r.id),
                    "parents",
                    format!("unknown row id {p}"),
                ));
            }
        }
        for d in &r.descendants {
            if *d == 0 || *d > n {
                return Err(Error::schema(
                    Some(r.id),
                    "descendants",
                    format!("unknown row id {d}"),
                ));
            }
        }
    }
    Ok(Catalog {
        schema_version: version,
        rows,
    })
}

fn parse_row(index: usize, v: &Value) -> Result<CatalogRow> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema(None, &format!("rows[{index}]"), "expected an object"))?;
    let id_value = obj
        .get("id")
        .and_then(Value::as_u64)
        .filter(|&id| id > 0 && id <= u64::from(u32::MAX))
        .ok_or_else(|| {
            Error::schema(
                None,
                &format!("rows[{index}].id"),
                "expected a positive integer",
            )
        })?;
    let id = id_value as u32;
    let err = |field: &str, msg: String| Error::schema(Some(id), field, msg);
    let get = |field: &str| obj.get(field).ok_or_else(|| err(field, "missing".into()));

    let fano_label = get("fano_label")?
        .as_str()
        .ok_or_else(|| err("fano_label", "expected a string".into()))?
        .parse::<FanoLabel>()
        .map_err(|m| err("fano_label", m))?;
    let degree = get("degree")?
        .as_u64()
        .ok_or_else(|| err("degree", "expected a non-negative integer".into()))?;
    if degree == 0 || degree % 2 != 0 {
        return Err(err(
            "degree",
            format!("degree {degree} must be positive and even"),
        ));
    }
    let parents = get("parents")?
        .as_array()
        .ok_or_else(|| err("parents", "expected an array".into()))?
        .iter()
        .map(|p| {
            let pair = p.as_array().filter(|a| a.len() == 2);
            let (pid, t) = pair
                .and_then(|a| Some((a[0].as_u64()?, a[1].as_str()?)))
                .ok_or_else(|| err("parents", "entries must be [id, type]".into()))?;
            let t = t
                .parse::<LinkType>()
                .map_err(|e| err("parents", e.to_string()))?;
            let pid =
                u32::try_from(pid).map_err(|_| err("parents", format!("id {pid} out of range")))?;
            Ok((pid, t))
        })
        .collect::<Result<Vec<_>>>()?;
    let descendants = get("descendants")?
        .as_array()
        .ok_or_else(|| err("descendants", "expected an array".into()))?
        .iter()
        .map(|d| {
            d.as_u64()
                .and_then(|d| u32::try_from(d).ok())
                .ok_or_else(|| err("descendants", "expected integer ids".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let terms: Vec<Term> = serde_json::from_value(get("terms")?.clone()).map_err(|e| {
        err(
            "terms",
            format!("expected [[coeff, [e1, e2, e3]], ...]: {e}"),
        )
    })?;
    let polynomial =
        LaurentPolynomial::from_term_list(3, &terms).map_err(|e| err("terms", e.to_string()))?;
    if polynomial.is_zero() {
        return Err(err("terms", "polynomial is zero".into()));
    }
    let expression = match obj.get("expression") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(err("expression", "expected a string".into())),
    };
    let transform = match obj.get("transform") {
        None | Some(Value::Null) => Transform::None,
        Some(Value::String(s)) if s == "unknown" => Transform::Unknown,
        Some(m @ Value::Array(_)) => {
            let matrix: Vec<Vec<i64>> = serde_json::from_value(m.clone())
                .map_err(|e| err("transform", format!("expected an integer matrix: {e}")))?;
            let u = UnimodularMap::new(matrix).map_err(|e| err("transform", e.to_string()))?;
            if u.dim() != 3 {
                return Err(err("transform", "expected a 3x3 matrix".into()));
            }
            Transform::Matrix(u)
        }
        Some(_) => {
            return Err(err(
                "transform",
                "expected null, \"unknown\" or a matrix".into(),
            ))
        }
    };
    let notes = match obj.get("notes") {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(err("notes", "expected a string".into())),
    };
    Ok(CatalogRow {
        id,
        fano_label,
        degree,
        parents,
        descendants,
        expression,
        polynomial,
        transform,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub id: u32,
    pub reflexive: bool,
    pub dual_volume: Option<u64>,
    pub volume_ok: bool,
    pub dual_points: Option<usize>,
    pub points_ok: bool,
    pub genus_ok: bool,
    /// The recorded expression (if any) expands to the recorded terms.
    pub expression_ok: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub rows: Vec<RowReport>,
    pub edges: Vec<LinkReport>,
    pub global: Vec<GlobalCheck>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in self.rows.iter().filter(|r| !r.pass) {
            out.push(format!(
                "row {}: reflexive={} volume={} points={} genus={} expression={}",
                r.id, r.reflexive, r.volume_ok, r.points_ok, r.genus_ok, r.expression_ok
            ));
        }
        for e in self.edges.iter().filter(|e| !e.pass) {
            out.push(format!(
                "edge {}->{} ({}): drop={} reflexive={} containment={}",
                e.parent,
                e.child,
                e.link_type,
                e.checks.drop,
                e.checks.reflexive,
                e.checks.containment
            ));
        }
        for g in self.global.iter().filter(|g| !g.pass) {
            out.push(format!("{}: {}", g.name, g.detail));
        }
        out
    }
}

pub fn validate_row(row: &CatalogRow) -> RowReport {
    let newton = row.newton_polytope().ok();
    let dual = newton
        .as_ref()
        .and_then(|p| p.dual().ok())
        .and_then(|d| d.to_lattice());
    let reflexive = dual.is_some();
    let dual_volume = dual.as_ref().map(LatticePolytope::normalized_volume);
    let dual_points = dual.as_ref().map(|d| d.lattice_points().all);
    let volume_ok = dual_volume == Some(row.degree);
    let points_ok = dual_points == Some((row.degree / 2 + 3) as usize);
    let genus_ok = row.genus() >= 2;
    let expression_ok = match &row.expression {
        None => true,
        Some(s) => parse(s, 3).is_ok_and(|p| p == row.polynomial),
    };
    RowReport {
        id: row.id,
        reflexive,
        dual_volume,
        volume_ok,
        dual_points,
        points_ok,
        genus_ok,
        expression_ok,
        pass: reflexive && volume_ok && points_ok && genus_ok && expression_ok,
    }
}

pub fn verify_edge(catalog: &Catalog, parent: u32, child: u32, t: LinkType) -> Result<LinkReport> {
    verify_link(catalog.row(parent)?, catalog.row(child)?, t)
}

/// Per-row, per-edge and whole-table checks. Failures are report entries.
pub fn validate_all(catalog: &Catalog, mode: Parallelism) -> ValidationReport {
    let rows = par::map(catalog.rows(), mode, validate_row);
    let edge_list = catalog.edges();
    let edges = par::map(&edge_list, mode, |&(p, c, t)| {
        verify_edge(catalog, p, c, t).unwrap_or(LinkReport {
            parent: p,
            child: c,
            link_type: t,
            checks: LinkChecks {
                drop: false,
                reflexive: false,
                containment: false,
            },
            containment: Containment::Direct,
            pass: false,
        })
    });
    let global = vec![
        check_inverse(catalog),
        check_labels(catalog),
        check_genus(catalog),
        check_smooth_point_chains(catalog),
        check_threshold_notes(catalog),
    ];
    let pass = rows.iter().all(|r| r.pass)
        && edges.iter().all(|e| e.pass)
        && global.iter().all(|g| g.pass);
    ValidationReport {
        rows,
        edges,
        global,
        pass,
    }
}

fn check_inverse(catalog: &Catalog) -> GlobalCheck {
    let mut from_parents: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for (p, c, _) in catalog.edges() {
        from_parents.entry(p).or_default().insert(c);
    }
    let bad: Vec<u32> = catalog
        .rows()
        .iter()
        .filter(|r| {
            let listed: BTreeSet<u32> = r.descendants.iter().copied().collect();
            listed.len() != r.descendants.len()
                || from_parents.get(&r.id).cloned().unwrap_or_default() != listed
        })
        .map(|r| r.id)
        .collect();
    GlobalCheck {
        name: "descendants_inverse_of_parents",
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "all rows consistent".into()
        } else {
            format!("inconsistent rows {bad:?}")
        },
    }
}

fn check_labels(catalog: &Catalog) -> GlobalCheck {
    let mut seen: BTreeMap<FanoLabel, Vec<u32>> = BTreeMap::new();
    for r in catalog.rows() {
        seen.entry(r.fano_label).or_default().push(r.id);
    }
    let dups: Vec<String> = seen
        .iter()
        .filter(|(_, ids)| ids.len() > 1)
        .map(|(l, ids)| format!("{l}: {ids:?}"))
        .collect();
    GlobalCheck {
        name: "labels_unique",
        pass: dups.is_empty(),
        detail: if dups.is_empty() {
            format!("{} distinct labels", seen.len())
        } else {
            dups.join("; ")
        },
    }
}

fn check_genus(catalog: &Catalog) -> GlobalCheck {
    let bad: Vec<u32> = catalog
        .rows()
        .iter()
        .filter(|r| r.genus() < 2)
        .map(|r| r.id)
        .collect();
    GlobalCheck {
        name: "genus_positive",
        pass: bad.is_empty(),
        detail: format!("rows with g < 2: {bad:?}"),
    }
}

/// Maximal chains of smooth-point links; degrees along each must fall by 8.
pub fn smooth_point_chains(catalog: &Catalog) -> Vec<Vec<u32>> {
    let mut next: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut has_parent = BTreeSet::new();
    for (p, c, t) in catalog.edges() {
        if t == LinkType::SmoothPoint {
            next.entry(p).or_default().push(c);
            has_parent.insert(c);
        }
    }
    let mut chains = Vec::new();
    for &start in next.keys().filter(|k| !has_parent.contains(k)) {
        let mut stack = vec![vec![start]];
        while let Some(path) = stack.pop() {
            let last = *path.last().expect("non-empty path");
            match next.get(&last) {
                Some(children) => {
                    for &c in children.iter().rev() {
                        let mut p = path.clone();
                        p.push(c);
                        stack.push(p);
                    }
                }
                None => chains.push(path),
            }
        }
    }
    chains
}

fn check_smooth_point_chains(catalog: &Catalog) -> GlobalCheck {
    let chains = smooth_point_chains(catalog);
    let degree = |id: u32| catalog.row(id).map(|r| r.degree).unwrap_or(0);
    let pass = chains.iter().all(|c| {
        c.windows(2).all(|w| {
            degree(w[0]).checked_sub(degree(w[1])) == Some(LinkType::SmoothPoint.degree_drop())
        })
    });
    let detail = chains
        .iter()
        .map(|c| {
            c.iter()
                .map(|&id| format!("{id}({})", degree(id)))
                .collect::<Vec<_>>()
                .join(" -> ")
        })
        .collect::<Vec<_>>()
        .join("; ");
    GlobalCheck {
        name: "smooth_point_chains",
        pass,
        detail,
    }
}

fn check_threshold_notes(catalog: &Catalog) -> GlobalCheck {
    let bad: Vec<u32> = catalog
        .rows()
        .iter()
        .filter(|r| {
            r.degree <= INDEX_TWO_THRESHOLD
                && r.parents.iter().any(|(_, t)| *t == LinkType::SmoothPoint)
                && r.notes.trim().is_empty()
        })
        .map(|r| r.id)
        .collect();
    GlobalCheck {
        name: "smooth_point_threshold_notes",
        pass: bad.is_empty(),
        detail: format!("rows missing a note: {bad:?}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub id: u32,
    pub modulus: Option<u64>,
    pub depth: u32,
    /// Indices `i` with `a_i ≠ 0` although the modulus does not divide `i`.
    pub violations: Vec<usize>,
    pub pass: bool,
}

/// Periods to `depth` vanish off multiples of the support modulus.
pub fn support_congruence(
    catalog: &Catalog,
    depth: u32,
    mode: Parallelism,
) -> Vec<CongruenceReport> {
    par::map(catalog.rows(), mode, |row| {
        let modulus = support_modulus(&row.polynomial);
        let values = period_sequence(&row.polynomial, depth).values;
        let violations: Vec<usize> = values
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(i, a)| {
                let allowed = modulus.is_some_and(|m| (*i as u64).is_multiple_of(m));
                !allowed && !num_traits::Zero::is_zero(*a)
            })
            .map(|(i, _)| i)
            .collect();
        CongruenceReport {
            id: row.id,
            modulus,
            depth,
            pass: violations.is_empty(),
            violations,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let l: FanoLabel = "1.17".parse().unwrap();
        assert_eq!((l.picard_rank(), l.index()), (1, Some(4)));
        assert_eq!(l.classical_name().as_deref(), Some("P^3"));
        assert_eq!(
            "1.10"
                .parse::<FanoLabel>()
                .unwrap()
                .classical_name()
                .as_deref(),
            Some("X_22")
        );
        assert_eq!(
            "1.15"
                .parse::<FanoLabel>()
                .unwrap()
                .classical_name()
                .as_deref(),
            Some("V_5")
        );
        assert_eq!("2.35".parse::<FanoLabel>().unwrap().index(), None);
        assert!("1".parse::<FanoLabel>().is_err());
        assert!("0.3".parse::<FanoLabel>().is_err());
    }

    #[test]
    fn bundled_loads() {
        let c = Catalog::bundled();
        assert_eq!(c.len(), 27);
        assert_eq!(c.row(2).unwrap().degree, 56);
        assert_eq!(c.row(2).unwrap().parents, vec![(1, LinkType::SmoothPoint)]);
        assert_eq!(c.row(28), Err(Error::UnknownRow(28)));
        assert_eq!(c.row(0), Err(Error::UnknownRow(0)));
    }
}
