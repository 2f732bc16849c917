//! JSON encodings. Scalars are `[re, im]` pairs: exact parts as `"p/q"`
//! strings, float parts as numbers with 17 significant digits. Matrices are
//! flat row-major lists of such pairs; shapes come from `k` and `l`.
//!
//! ```json
//! {"kind": "quadruple", "k": 1, "l": 1, "backend": "exact",
//!  "X": [["0","0"]], "Y": [["0","0"]], "F": [["1","0"]], "G": [["1","0"]]}
//! ```

use serde_json::{json, Map, Value};

use crate::algebra::{Backend, BiPoly, CMatrix, ConjClassInvariant, GaussRat, Poly, Scalar, C64};
use crate::cohomology::{HilbertPolynomial, RankTheoremReport, SplittingType, Theorem1Report};
use crate::error::{Error, Result};
use crate::loop_orbit::{BoundaryData, Direction, OrbitSpec, RationalMap};
use crate::pencil::{BipurityReport, Pencil, Quadruple, SpectralCurve, UnobservableWitness};

pub fn encode_scalar<S: Scalar>(s: &S) -> Value {
    Value::Array(vec![s.encode_part(false), s.encode_part(true)])
}

pub fn encode_matrix<S: Scalar>(m: &CMatrix<S>) -> Value {
    Value::Array(m.as_slice().iter().map(encode_scalar).collect())
}

pub fn encode_poly<S: Scalar>(p: &Poly<S>) -> Value {
    Value::Array(p.coeffs().iter().map(encode_scalar).collect())
}

/// `{"terms": [{"zeta": i, "eta": j, "coeff": [re, im]}, …], "text": …}`.
pub fn encode_bipoly<S: Scalar>(p: &BiPoly<S>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .iter()
        .map(|(i, j, c)| json!({"zeta": i, "eta": j, "coeff": encode_scalar(c)}))
        .collect();
    json!({"terms": terms, "text": p.to_string()})
}

pub fn encode_class<S: Scalar>(c: &ConjClassInvariant<S>) -> Value {
    let eigenvalues = c.eigenvalues.as_ref().map(|e| {
        e.iter()
            .map(|(v, m)| json!({"value": encode_scalar(v), "multiplicity": m}))
            .collect::<Vec<_>>()
    });
    let factors = c
        .invariant_factors
        .as_ref()
        .map(|f| f.iter().map(encode_poly).collect::<Vec<_>>());
    json!({
        "size": c.size,
        "rank": c.rank,
        "charpoly": c.charpoly.iter().map(encode_scalar).collect::<Vec<_>>(),
        "eigenvalues": eigenvalues,
        "rank_sequence": c.rank_sequence,
        "invariant_factors": factors,
        "semisimple": c.semisimple,
    })
}

pub fn encode_quadruple<S: Scalar>(q: &Quadruple<S>) -> Value {
    json!({
        "kind": "quadruple",
        "k": q.k(),
        "l": q.l(),
        "backend": S::BACKEND.as_str(),
        "X": encode_matrix(&q.x),
        "Y": encode_matrix(&q.y),
        "F": encode_matrix(&q.f),
        "G": encode_matrix(&q.g),
    })
}

pub fn encode_pencil<S: Scalar>(p: &Pencil<S>) -> Value {
    json!({
        "kind": "pencil",
        "k": p.k,
        "l": p.l,
        "backend": S::BACKEND.as_str(),
        "A0": encode_matrix(&p.a0),
        "A1": encode_matrix(&p.a1),
        "B0": encode_matrix(&p.b0),
        "B1": encode_matrix(&p.b1),
    })
}

pub fn encode_rational_map<S: Scalar>(r: &RationalMap<S>) -> Value {
    json!({
        "kind": "rational_map",
        "l": r.l(),
        "backend": S::BACKEND.as_str(),
        "Y": encode_matrix(&r.y),
        "poles": r.poles.iter().map(encode_scalar).collect::<Vec<_>>(),
        "residues": r.residues.iter().map(encode_matrix).collect::<Vec<_>>(),
    })
}

pub fn encode_orbit_spec<S: Scalar>(o: &OrbitSpec<S>) -> Value {
    json!({
        "poles": o.poles.iter().map(encode_scalar).collect::<Vec<_>>(),
        "ranks": o.ranks(),
        "Q0": encode_class(&o.q0),
        "residue_classes": o.residue_classes.iter().map(encode_class).collect::<Vec<_>>(),
        "non_semisimple": o.non_semisimple,
    })
}

pub fn encode_boundary<S: Scalar>(b: &BoundaryData<S>) -> Value {
    let direction = match b.direction {
        Direction::EtaInfinity => "eta=inf",
        Direction::ZetaInfinity => "zeta=inf",
    };
    json!({
        "direction": direction,
        "points": b.points.iter().map(|(p, m)| json!({"at": encode_scalar(p), "multiplicity": m})).collect::<Vec<_>>(),
        "blocks": b.blocks.iter().map(encode_matrix).collect::<Vec<_>>(),
        "first_order": b.first_order.iter().map(encode_class).collect::<Vec<_>>(),
        "slopes": b.slopes.iter().map(|s| s.as_ref().map(|v| v.iter().map(encode_scalar).collect::<Vec<_>>())).collect::<Vec<_>>(),
        "charpoly_identity": b.charpoly_identity,
    })
}

pub fn encode_spectral_curve<S: Scalar>(c: &SpectralCurve<S>) -> Value {
    json!({
        "det": encode_bipoly(&c.det_poly),
        "squarefree_part": c.squarefree_part.as_ref().map(encode_bipoly),
        "minimal_polynomial": c.minimal_poly.as_ref().map(encode_bipoly),
    })
}

pub fn encode_hilbert(h: &HilbertPolynomial) -> Value {
    json!({"x": h.x_coeff, "y": h.y_coeff, "constant": h.constant})
}

pub fn encode_splitting(s: &SplittingType) -> Value {
    json!({"degrees": s.degrees, "torsion": s.torsion})
}

pub fn encode_bipurity<S: Scalar>(b: &BipurityReport<S>) -> Value {
    let witness = |w: &Option<UnobservableWitness<S>>| {
        w.as_ref().map(|w| {
            json!({
                "dimension": w.subspace.cols(),
                "eigenpair": w.eigenpair.as_ref().map(|(value, v)| json!({
                    "value": encode_scalar(value),
                    "vector": v.iter().map(encode_scalar).collect::<Vec<_>>(),
                })),
            })
        })
    };
    json!({
        "bipure": b.is_bipure(),
        "vertical_ok": b.vertical_ok,
        "horizontal_ok": b.horizontal_ok,
        "vertical_witness": witness(&b.vertical_witness),
        "horizontal_witness": witness(&b.horizontal_witness),
    })
}

pub fn encode_rank_theorem(r: &RankTheoremReport) -> Value {
    json!({
        "k": r.k,
        "l": r.l,
        "rank_f": r.rank_f,
        "rank_g": r.rank_g,
        "h0_f_m1_1": r.h0_m11,
        "h1_f_1_m1": r.h1_1m1,
        "w1": encode_splitting(&r.w1),
        "w2": encode_splitting(&r.w2),
        "ranks_full": r.ranks_full,
        "vanishings": r.vanishings,
        "equivalence_holds": r.equivalence_holds,
        "g_pairing_holds": r.g_pairing_holds,
        "f_pairing_holds": r.f_pairing_holds,
        "w1_route_agrees": r.w1_route_agrees,
        "w2_route_agrees": r.w2_route_agrees,
    })
}

pub fn encode_theorem1(t: &Theorem1Report) -> Value {
    json!({
        "dims": t.dims,
        "conditions": t.conditions,
        "all_hold": t.all_hold,
        "chi_l": t.chi_l,
        "genus": t.genus,
        "implied_degree": t.implied_degree,
        "agrees_with_rank_theorem": t.agrees_with_rank_theorem,
    })
}

/// Pretty JSON with a trailing newline; object keys are sorted, so equal
/// values give identical bytes.
pub fn to_pretty_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// A parsed document with its source text, for line diagnostics.
struct Doc<'a> {
    text: &'a str,
    root: Map<String, Value>,
}

impl<'a> Doc<'a> {
    fn parse(text: &'a str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        match value {
            Value::Object(root) => Ok(Self { text, root }),
            _ => Err(Error::Schema {
                field: "$".into(),
                line: Some(1),
                message: "expected a JSON object".into(),
            }),
        }
    }

    /// First line mentioning `"field"` as a key.
    fn line_of(&self, field: &str) -> Option<usize> {
        let key = format!("\"{field}\"");
        self.text.lines().position(|line| line.contains(&key)).map(|i| i + 1)
    }

    fn error(&self, field: &str, message: impl Into<String>) -> Error {
        let top = field.split(['[', '.']).next().unwrap_or(field);
        Error::Schema {
            field: field.to_string(),
            line: self.line_of(top),
            message: message.into(),
        }
    }

    fn get(&self, field: &str) -> Result<&Value> {
        self.root.get(field).ok_or_else(|| self.error(field, "missing field"))
    }

    fn usize(&self, field: &str) -> Result<usize> {
        self.get(field)?
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| self.error(field, "expected a non-negative integer"))
    }

    fn backend(&self) -> Result<Backend> {
        let v = self.get("backend")?;
        v.as_str()
            .ok_or_else(|| self.error("backend", "expected \"exact\" or \"float\""))?
            .parse()
            .map_err(|e: String| self.error("backend", e))
    }

    fn scalar<S: Scalar>(&self, v: &Value, field: &str) -> Result<S> {
        match v.as_array().map(Vec::as_slice) {
            Some([re, im]) => S::decode_pair(re, im).map_err(|e| self.error(field, e)),
            _ => Err(self.error(field, "expected a [re, im] pair")),
        }
    }

    fn matrix_value<S: Scalar>(&self, v: &Value, field: &str, rows: usize, cols: usize) -> Result<CMatrix<S>> {
        let items = v
            .as_array()
            .ok_or_else(|| self.error(field, "expected a flat row-major list of [re, im] pairs"))?;
        if items.len() != rows * cols {
            return Err(self.error(
                field,
                format!(
                    "expected {} entries for a {rows}x{cols} matrix, found {}",
                    rows * cols,
                    items.len()
                ),
            ));
        }
        let data = items
            .iter()
            .enumerate()
            .map(|(i, item)| self.scalar(item, &format!("{field}[{i}]")))
            .collect::<Result<Vec<S>>>()?;
        Ok(CMatrix::from_vec(rows, cols, data))
    }

    fn matrix<S: Scalar>(&self, field: &str, rows: usize, cols: usize) -> Result<CMatrix<S>> {
        self.matrix_value(self.get(field)?, field, rows, cols)
    }

    fn quadruple<S: Scalar>(&self) -> Result<Quadruple<S>> {
        let (k, l) = (self.usize("k")?, self.usize("l")?);
        Ok(Quadruple {
            x: self.matrix("X", k, k)?,
            y: self.matrix("Y", l, l)?,
            f: self.matrix("F", k, l)?,
            g: self.matrix("G", l, k)?,
        })
    }

    fn pencil<S: Scalar>(&self) -> Result<Pencil<S>> {
        let (k, l) = (self.usize("k")?, self.usize("l")?);
        let n = k + l;
        Ok(Pencil {
            k,
            l,
            a0: self.matrix("A0", n, k)?,
            a1: self.matrix("A1", n, k)?,
            b0: self.matrix("B0", n, l)?,
            b1: self.matrix("B1", n, l)?,
        })
    }

    fn rational_map<S: Scalar>(&self) -> Result<RationalMap<S>> {
        let l = self.usize("l")?;
        let y = self.matrix("Y", l, l)?;
        let list = |field: &str| -> Result<&Vec<Value>> {
            self.get(field)?
                .as_array()
                .ok_or_else(|| self.error(field, "expected a list"))
        };
        let poles = list("poles")?
            .iter()
            .enumerate()
            .map(|(i, v)| self.scalar(v, &format!("poles[{i}]")))
            .collect::<Result<Vec<S>>>()?;
        let residues = list("residues")?
            .iter()
            .enumerate()
            .map(|(i, v)| self.matrix_value(v, &format!("residues[{i}]"), l, l))
            .collect::<Result<Vec<_>>>()?;
        RationalMap::new(y, poles, residues).map_err(|e| self.error("poles", e.to_string()))
    }

    fn kind(&self) -> Result<&'static str> {
        if let Some(kind) = self.root.get("kind") {
            return match kind.as_str() {
                Some("quadruple") => Ok("quadruple"),
                Some("pencil") => Ok("pencil"),
                Some("rational_map") => Ok("rational_map"),
                _ => Err(self.error("kind", "expected \"quadruple\", \"pencil\" or \"rational_map\"")),
            };
        }
        if self.root.contains_key("X") {
            Ok("quadruple")
        } else if self.root.contains_key("A0") {
            Ok("pencil")
        } else if self.root.contains_key("residues") {
            Ok("rational_map")
        } else {
            Err(self.error("kind", "cannot tell the document kind (no X, A0 or residues)"))
        }
    }
}

/// A value on either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyBackend<E, F> {
    Exact(E),
    Float(F),
}

pub type AnyQuadruple = AnyBackend<Quadruple<GaussRat>, Quadruple<C64>>;
pub type AnyPencil = AnyBackend<Pencil<GaussRat>, Pencil<C64>>;
pub type AnyRationalMap = AnyBackend<RationalMap<GaussRat>, RationalMap<C64>>;

/// Any input document.
#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Quadruple(AnyQuadruple),
    Pencil(AnyPencil),
    RationalMap(AnyRationalMap),
}

pub fn parse_document(text: &str) -> Result<Document> {
    let doc = Doc::parse(text)?;
    let backend = doc.backend()?;
    Ok(match (doc.kind()?, backend) {
        ("quadruple", Backend::Exact) => Document::Quadruple(AnyBackend::Exact(doc.quadruple()?)),
        ("quadruple", Backend::Float) => Document::Quadruple(AnyBackend::Float(doc.quadruple()?)),
        ("pencil", Backend::Exact) => Document::Pencil(AnyBackend::Exact(doc.pencil()?)),
        ("pencil", Backend::Float) => Document::Pencil(AnyBackend::Float(doc.pencil()?)),
        (_, Backend::Exact) => Document::RationalMap(AnyBackend::Exact(doc.rational_map()?)),
        (_, Backend::Float) => Document::RationalMap(AnyBackend::Float(doc.rational_map()?)),
    })
}

pub fn parse_quadruple(text: &str) -> Result<AnyQuadruple> {
    match parse_document(text)? {
        Document::Quadruple(q) => Ok(q),
        _ => Err(Error::Schema {
            field: "kind".into(),
            line: None,
            message: "expected a quadruple".into(),
        }),
    }
}
