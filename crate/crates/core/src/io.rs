//! JSON surface interchange format.
//!
//! ```text
//! {"faces":[{"id":"f0","vertices":[[x,y],...]}],
//!  "gluings":[[["f0",0],["f1",2]],...],
//!  "marks":{"B":["f0",3]}}
//! ```
//! Coordinates use the `QSqrt2` encoding `{"a":["num","den"],"b":["num","den"]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{EdgeRef, Face, FlatComplex, Gluing, VertexRef};
use crate::error::ComplexError;
use crate::geom::Point2;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceRepr {
    id: String,
    vertices: Vec<Point2>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceRepr {
    faces: Vec<FaceRepr>,
    gluings: Vec<[(String, usize); 2]>,
    #[serde(default)]
    marks: BTreeMap<String, (String, usize)>,
}

/// Parses a surface without checking the translation-surface invariants.
pub fn parse_surface(text: &str) -> Result<FlatComplex, ComplexError> {
    let repr: SurfaceRepr = serde_json::from_str(text).map_err(|e| {
        let location = format!("line {} column {}", e.line(), e.column());
        let full = e.to_string();
        let message = full.strip_suffix(&format!(" at {location}")).unwrap_or(&full).to_string();
        ComplexError::Parse { location, message }
    })?;
    let faces: Vec<Face> = repr.faces.into_iter().map(|f| Face { id: f.id, vertices: f.vertices }).collect();
    let lookup = |id: &str, location: String| {
        faces
            .iter()
            .position(|f| f.id == id)
            .ok_or_else(|| ComplexError::Parse { location, message: format!("unknown face id {id:?}") })
    };
    let mut gluings = Vec::with_capacity(repr.gluings.len());
    for (i, [(fa, ea), (fb, eb)]) in repr.gluings.iter().enumerate() {
        let a = EdgeRef { face: lookup(fa, format!("gluings[{i}][0]"))?, edge: *ea };
        let b = EdgeRef { face: lookup(fb, format!("gluings[{i}][1]"))?, edge: *eb };
        gluings.push(Gluing(a, b));
    }
    let mut marks = BTreeMap::new();
    for (label, (f, v)) in &repr.marks {
        let face = lookup(f, format!("marks.{label}"))?;
        marks.insert(label.clone(), VertexRef { face, vertex: *v });
    }
    Ok(FlatComplex { faces, gluings, marks })
}

/// Parses and validates; semantic failures carry the full report.
pub fn load_surface(text: &str) -> Result<FlatComplex, ComplexError> {
    let c = parse_surface(text)?;
    c.ensure_valid()?;
    Ok(c)
}

pub fn save_surface(c: &FlatComplex) -> String {
    let repr = SurfaceRepr {
        faces: c.faces.iter().map(|f| FaceRepr { id: f.id.clone(), vertices: f.vertices.clone() }).collect(),
        gluings: c
            .gluings
            .iter()
            .map(|g| [(c.faces[g.0.face].id.clone(), g.0.edge), (c.faces[g.1.face].id.clone(), g.1.edge)])
            .collect(),
        marks: c.marks.iter().map(|(k, v)| (k.clone(), (c.faces[v.face].id.clone(), v.vertex))).collect(),
    };
    serde_json::to_string_pretty(&repr).expect("surface serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::unit_square_torus;

    #[test]
    fn round_trip() {
        let mut t = unit_square_torus();
        t.marks.insert("O".into(), VertexRef { face: 0, vertex: 0 });
        let text = save_surface(&t);
        assert_eq!(load_surface(&text).unwrap(), t);
        assert_eq!(save_surface(&load_surface(&text).unwrap()), text);
    }

    #[test]
    fn zero_denominator_is_parse_error() {
        let z = r#"{"a":["0","1"],"b":["0","1"]}"#;
        let bad = r#"{"a":["1","0"],"b":["0","1"]}"#;
        let text = format!(r#"{{"faces":[{{"id":"t","vertices":[[{z},{z}],[{bad},{z}],[{z},{z}]]}}],"gluings":[]}}"#);
        assert!(matches!(parse_surface(&text), Err(ComplexError::Parse { .. })));
    }

    #[test]
    fn unknown_face_is_parse_error() {
        let text = save_surface(&unit_square_torus()).replacen(r#""sq","#, r#""nope","#, 1);
        match parse_surface(&text) {
            Err(ComplexError::Parse { location, .. }) => assert!(location.starts_with("gluings")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_gluing_surfaces_validation() {
        let mut t = unit_square_torus();
        t.gluings[0] = Gluing(EdgeRef { face: 0, edge: 0 }, EdgeRef { face: 0, edge: 0 });
        match load_surface(&save_surface(&t)) {
            Err(ComplexError::Invalid(r)) => assert!(!r.is_valid()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
