//! Parsing and serialization: relation documents in JSON or edge-list form,
//! canonical JSON for every artifact, DOT for Hasse diagrams, and simple SVG
//! for the geometric representations.
//!
//! JSON output is canonical: object keys sorted, elements in sequence order,
//! rationals as exact `"p/q"` strings. `parse(emit(r)) == r` for relations.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::ClassReport;
use crate::dimension::{DimCertificate, DimValue};
use crate::error::Error;
use crate::extend::Decomposition;
use crate::geometry::{GeometricRep, RepKind};
use crate::realize::Realizer;
use crate::relation::Relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseFormat {
    Json,
    Edgelist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Json,
    Dot,
    Svg,
}

/// The on-disk JSON form of a relation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub elements: Vec<String>,
    pub pairs: Vec<(String, String)>,
}

impl RelationDocument {
    pub fn from_relation(r: &Relation) -> Self {
        RelationDocument {
            name: None,
            elements: r.elements().to_vec(),
            pairs: r
                .pairs()
                .map(|(i, j)| (r.label(i).to_owned(), r.label(j).to_owned()))
                .collect(),
        }
    }

    pub fn to_relation(&self) -> Result<Relation, Error> {
        let index = |label: &str| {
            self.elements
                .iter()
                .position(|e| e == label)
                .ok_or_else(|| Error::UnknownElement {
                    label: label.to_owned(),
                })
        };
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for (a, b) in &self.pairs {
            pairs.push((index(a)?, index(b)?));
        }
        Relation::new(self.elements.clone(), &pairs)
    }
}

pub fn parse_relation(text: &str, format: ParseFormat) -> Result<Relation, Error> {
    match format {
        ParseFormat::Json => {
            let doc: RelationDocument =
                serde_json::from_str(text).map_err(|e| Error::Parse {
                    line: e.line(),
                    msg: e.to_string(),
                })?;
            doc.to_relation()
        }
        ParseFormat::Edgelist => parse_edgelist(text),
    }
}

/// One `a b` pair per line; elements inferred in first-appearance order, or
/// declared up front with a `#elements: a b c` header. Other `#` lines are
/// comments.
fn parse_edgelist(text: &str) -> Result<Relation, Error> {
    let mut elements: Vec<String> = Vec::new();
    let mut declared = false;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#elements:") {
            if declared || !elements.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "#elements: header must come first and appear once".into(),
                });
            }
            for label in rest.split_whitespace() {
                if elements.iter().any(|e| e == label) {
                    return Err(Error::DuplicateElement {
                        label: label.to_owned(),
                    });
                }
                elements.push(label.to_owned());
            }
            declared = true;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = tokens[..] else {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("expected two labels, got {}", tokens.len()),
            });
        };
        let mut index = |label: &str| -> Result<usize, Error> {
            match elements.iter().position(|e| e == label) {
                Some(i) => Ok(i),
                None if declared => Err(Error::UnknownElement {
                    label: label.to_owned(),
                }),
                None => {
                    elements.push(label.to_owned());
                    Ok(elements.len() - 1)
                }
            }
        };
        let ia = index(a)?;
        let ib = index(b)?;
        pairs.push((ia, ib));
    }
    Relation::new(elements, &pairs)
}

/// Anything the CLI can serialize.
#[derive(Debug, Clone, Copy)]
pub enum Artifact<'a> {
    Relation(&'a Relation),
    ClassReport(&'a ClassReport),
    Decomposition(&'a Decomposition),
    Realizer(&'a Realizer),
    Certificate(&'a DimCertificate),
    Geometry(&'a GeometricRep),
    Audit(&'a crate::audit::AuditReport),
}

impl Artifact<'_> {
    fn kind_name(&self) -> &'static str {
        match self {
            Artifact::Relation(_) => "relation",
            Artifact::ClassReport(_) => "class report",
            Artifact::Decomposition(_) => "decomposition",
            Artifact::Realizer(_) => "realizer",
            Artifact::Certificate(_) => "dimension certificate",
            Artifact::Geometry(_) => "geometric representation",
            Artifact::Audit(_) => "audit report",
        }
    }
}

fn ratio_str(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn relation_value(r: &Relation) -> Value {
    serde_json::to_value(RelationDocument::from_relation(r)).expect("document serializes")
}

fn decomposition_value(d: &Decomposition) -> Value {
    json!({
        "linear_part": relation_value(&d.linear_part),
        "partner": relation_value(&d.partner),
        "partner_class": serde_json::to_value(d.partner_class).unwrap(),
        "verified": d.verified,
    })
}

fn realizer_value(r: &Realizer) -> Value {
    json!({
        "target": relation_value(&r.target),
        "member_class": serde_json::to_value(r.member_class).unwrap(),
        "members": r.members.iter().map(relation_value).collect::<Vec<_>>(),
        "member_tags": r.member_tags,
        "decompositions": r
            .decompositions
            .iter()
            .map(|d| d.as_ref().map_or(Value::Null, decomposition_value))
            .collect::<Vec<_>>(),
    })
}

fn certificate_value(c: &DimCertificate) -> Value {
    let value = match c.value {
        DimValue::Scalar(v) => json!(v),
        DimValue::Pair(p, q) => json!([p, q]),
    };
    json!({
        "quantity": serde_json::to_value(c.quantity).unwrap(),
        "value": value,
        "witness": realizer_value(&c.witness),
        "exhaustive": c.exhaustive,
        "budget_used": c.budget_used,
    })
}

fn geometry_value(g: &GeometricRep) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), json!(g.kind.name()));
    obj.insert("elements".into(), json!(g.elements));
    if let Some(apexes) = &g.apexes {
        obj.insert(
            "apexes".into(),
            json!(apexes.iter().map(|&a| ratio_str(a)).collect::<Vec<_>>()),
        );
    }
    obj.insert(
        "intervals".into(),
        json!(g
            .intervals
            .iter()
            .map(|per| per
                .iter()
                .map(|&(a, b)| vec![ratio_str(a), ratio_str(b)])
                .collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    Value::Object(obj)
}

pub fn emit(artifact: Artifact<'_>, format: EmitFormat) -> Result<String, Error> {
    match format {
        EmitFormat::Json => {
            let value = match artifact {
                Artifact::Relation(r) => relation_value(r),
                Artifact::ClassReport(c) => serde_json::to_value(c)?,
                Artifact::Decomposition(d) => decomposition_value(d),
                Artifact::Realizer(r) => realizer_value(r),
                Artifact::Certificate(c) => certificate_value(c),
                Artifact::Geometry(g) => geometry_value(g),
                Artifact::Audit(a) => serde_json::to_value(a)?,
            };
            Ok(format!("{}\n", serde_json::to_string_pretty(&value)?))
        }
        EmitFormat::Dot => match artifact {
            Artifact::Relation(r) => Ok(emit_dot(r)),
            other => Err(Error::UnsupportedCombination(format!(
                "dot output of a {}",
                other.kind_name()
            ))),
        },
        EmitFormat::Svg => match artifact {
            Artifact::Geometry(g) => emit_svg(g),
            other => Err(Error::UnsupportedCombination(format!(
                "svg output of a {}",
                other.kind_name()
            ))),
        },
    }
}

/// Hasse-style DOT: the transitive reduction of the closure for acyclic
/// relations, the raw pairs otherwise.
fn emit_dot(r: &Relation) -> String {
    let n = r.len();
    let edges: Vec<(usize, usize)> = if r.is_acyclic() {
        let c = r.transitive_closure();
        c.pairs()
            .filter(|&(i, j)| !(0..n).any(|k| k != i && k != j && c.contains(i, k) && c.contains(k, j)))
            .collect()
    } else {
        r.pairs().collect()
    };
    let mut out = String::from("digraph relation {\n  rankdir=BT;\n");
    for i in 0..n {
        out.push_str(&format!("  \"{}\";\n", r.label(i)));
    }
    for (i, j) in edges {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", r.label(i), r.label(j)));
    }
    out.push_str("}\n");
    out
}

fn px(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64 * 60.0 + 20.0
}

fn emit_svg(g: &GeometricRep) -> Result<String, Error> {
    let n = g.elements.len();
    let mut body = String::new();
    let width = 40.0
        + g.intervals
            .iter()
            .flatten()
            .map(|&(_, b)| px(b))
            .fold(0.0, f64::max);
    let height;
    match g.kind {
        RepKind::Interval | RepKind::UnitInterval => {
            height = 40.0 + 24.0 * n as f64;
            for (x, per) in g.intervals.iter().enumerate() {
                let (a, b) = per[0];
                let y = 30.0 + 24.0 * x as f64;
                body.push_str(&format!(
                    "  <line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                    px(a),
                    px(b),
                ));
                body.push_str(&format!(
                    "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{}</text>\n",
                    px(a),
                    y - 4.0,
                    g.elements[x]
                ));
            }
        }
        RepKind::Triangle | RepKind::UnitTriangle => {
            let apexes = g
                .apexes
                .as_ref()
                .ok_or_else(|| Error::UnsupportedCombination("triangle svg without apexes".into()))?;
            let y_top = 20.0;
            let y_base = 140.0;
            height = y_base + 30.0;
            body.push_str(&format!(
                "  <line x1=\"0\" y1=\"{y_top}\" x2=\"{width:.1}\" y2=\"{y_top}\" stroke=\"gray\"/>\n"
            ));
            body.push_str(&format!(
                "  <line x1=\"0\" y1=\"{y_base}\" x2=\"{width:.1}\" y2=\"{y_base}\" stroke=\"gray\"/>\n"
            ));
            for x in 0..n {
                let (a, b) = g.intervals[x][0];
                body.push_str(&format!(
                    "  <polygon points=\"{:.1},{y_base} {:.1},{y_base} {:.1},{y_top}\" fill=\"none\" stroke=\"black\"/>\n",
                    px(a),
                    px(b),
                    px(apexes[x]),
                ));
                body.push_str(&format!(
                    "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{}</text>\n",
                    px(apexes[x]),
                    y_top - 6.0,
                    g.elements[x]
                ));
            }
        }
        RepKind::Box => {
            if g.intervals.iter().any(|per| per.len() != 2) {
                return Err(Error::UnsupportedCombination(
                    "svg box rendering needs exactly 2 coordinates".into(),
                ));
            }
            height = width;
            for x in 0..n {
                let (a0, b0) = g.intervals[x][0];
                let (a1, b1) = g.intervals[x][1];
                body.push_str(&format!(
                    "  <rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"black\"/>\n",
                    px(a0),
                    px(a1),
                    px(b0) - px(a0),
                    px(b1) - px(a1),
                ));
                body.push_str(&format!(
                    "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{}</text>\n",
                    px(a0) + 2.0,
                    px(a1) + 12.0,
                    g.elements[x]
                ));
            }
        }
    }
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.1}\" height=\"{height:.1}\">\n{body}</svg>\n"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::PartnerClass;
    use crate::geometry::triangle_representation;
    use crate::Limits;

    #[test]
    fn json_round_trip() {
        let r = Relation::on_indexed(4, &[(0, 1), (2, 3)]);
        let text = emit(Artifact::Relation(&r), EmitFormat::Json).unwrap();
        assert_eq!(parse_relation(&text, ParseFormat::Json).unwrap(), r);
    }

    #[test]
    fn json_parse_examples() {
        let r = parse_relation(
            r#"{"elements":["x1","x2"],"pairs":[["x1","x2"]]}"#,
            ParseFormat::Json,
        )
        .unwrap();
        assert_eq!(r, Relation::on_indexed(2, &[(0, 1)]));

        assert!(matches!(
            parse_relation(r#"{"elements":["a","a"],"pairs":[]}"#, ParseFormat::Json),
            Err(Error::DuplicateElement { .. })
        ));
        assert!(matches!(
            parse_relation(r#"{"elements":["a"],"pairs":[["a","b"]]}"#, ParseFormat::Json),
            Err(Error::UnknownElement { .. })
        ));
        assert!(matches!(
            parse_relation("{", ParseFormat::Json),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn edgelist_parse() {
        let r = parse_relation("x1 x2\nx3 x4\n", ParseFormat::Edgelist).unwrap();
        assert_eq!(r.elements(), ["x1", "x2", "x3", "x4"]);
        assert_eq!(r, Relation::on_indexed(4, &[(0, 1), (2, 3)]));

        let with_header =
            parse_relation("#elements: a b c\nb c\n", ParseFormat::Edgelist).unwrap();
        assert_eq!(with_header.elements(), ["a", "b", "c"]);
        assert_eq!(with_header.pair_count(), 1);

        assert!(matches!(
            parse_relation("#elements: a\na b\n", ParseFormat::Edgelist),
            Err(Error::UnknownElement { .. })
        ));
        assert!(matches!(
            parse_relation("a b c\n", ParseFormat::Edgelist),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn dot_reduces_transitive_edges() {
        let chain = Relation::on_indexed(3, &[(0, 1), (1, 2), (0, 2)]);
        let dot = emit(Artifact::Relation(&chain), EmitFormat::Dot).unwrap();
        assert!(dot.contains("\"x1\" -> \"x2\""));
        assert!(dot.contains("\"x2\" -> \"x3\""));
        assert!(!dot.contains("\"x1\" -> \"x3\""));
    }

    #[test]
    fn svg_of_triangle_rep_has_four_triangles() {
        let r = Relation::on_indexed(4, &[(0, 1), (2, 3)]);
        let rep = triangle_representation(&r, PartnerClass::IntervalOrder, &Limits::default())
            .unwrap();
        let svg = emit(Artifact::Geometry(&rep), EmitFormat::Svg).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 4);
        assert_eq!(svg.matches("<line").count(), 2);
    }

    #[test]
    fn unsupported_combinations() {
        let r = Relation::on_indexed(2, &[]);
        assert!(matches!(
            emit(Artifact::Relation(&r), EmitFormat::Svg),
            Err(Error::UnsupportedCombination(_))
        ));
    }

    #[test]
    fn rationals_serialize_exactly() {
        assert_eq!(ratio_str(Rational64::new(2, 3)), "2/3");
        assert_eq!(ratio_str(Rational64::from_integer(2)), "2/1");
    }
}
