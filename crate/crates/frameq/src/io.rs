//! JSON and CSV file formats. Indices are 0-based and complex numbers are
//! `[re, im]` pairs.

use std::collections::BTreeMap;

use frameq_core::harmonic::{anomalies, CensusRow};
use frameq_core::{
    DeterminingSet, Error, Frame, FrameGraph, GramMatrix, MProduct, PhaseVector, QRecipe, Scalar,
    SimilarityVerdict, Tolerance, TripleProducts, Verdict, Witness,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub type Complex = [f64; 2];

fn pack(z: Scalar) -> Complex {
    [z.re, z.im]
}

fn unpack(z: Complex) -> Scalar {
    Scalar::new(z[0], z[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub dim: usize,
    pub vectors: Vec<Vec<Complex>>,
}

impl FrameFile {
    pub fn from_frame(f: &Frame) -> Self {
        FrameFile {
            dim: f.dim(),
            vectors: f
                .vectors()
                .iter()
                .map(|v| v.iter().copied().map(pack).collect())
                .collect(),
        }
    }

    pub fn to_frame(&self) -> Result<Frame, Error> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| v.iter().copied().map(unpack).collect())
            .collect();
        Frame::new(self.dim, vectors)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramFile {
    pub n: usize,
    pub entries: Vec<Vec<Complex>>,
}

impl GramFile {
    pub fn from_gram(g: &GramMatrix) -> Self {
        GramFile {
            n: g.n(),
            entries: g
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(pack).collect())
                .collect(),
        }
    }

    pub fn to_gram(&self, tol: &Tolerance) -> Result<GramMatrix, Error> {
        if self.entries.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.entries.len(),
            });
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().copied().map(unpack).collect())
            .collect();
        GramMatrix::from_rows(rows, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn from_graph(g: &FrameGraph) -> Self {
        GraphFile {
            n: g.n(),
            edges: g.edges().into_iter().map(|(j, k)| [j, k]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleEntry {
    pub indices: Vec<usize>,
    pub value: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductsFile {
    pub n: usize,
    pub norms: Vec<f64>,
    pub moduli: Vec<Vec<f64>>,
    pub cycles: Vec<CycleEntry>,
}

impl ProductsFile {
    pub fn from_set(s: &DeterminingSet) -> Self {
        ProductsFile {
            n: s.n,
            norms: s.norms.clone(),
            moduli: s
                .moduli
                .chunks(s.n.max(1))
                .map(<[f64]>::to_vec)
                .take(s.n)
                .collect(),
            cycles: s
                .cycle_products
                .iter()
                .map(|p| CycleEntry {
                    indices: p.indices.clone(),
                    value: pack(p.value),
                })
                .collect(),
        }
    }

    /// 1- and 2-products of `g` with an explicit list of products.
    pub fn with_products(g: &GramMatrix, products: Vec<CycleEntry>) -> Self {
        let n = g.n();
        ProductsFile {
            n,
            norms: (0..n).map(|j| g.get(j, j).re).collect(),
            moduli: (0..n)
                .map(|j| (0..n).map(|k| g.modulus(j, k)).collect())
                .collect(),
            cycles: products,
        }
    }

    pub fn from_triples(g: &GramMatrix, t: &TripleProducts) -> Self {
        let products = t
            .iter()
            .map(|((a, b, c), v)| CycleEntry {
                indices: vec![a, b, c],
                value: pack(v),
            })
            .collect();
        Self::with_products(g, products)
    }

    pub fn to_set(&self) -> Result<DeterminingSet, Error> {
        if self.moduli.len() != self.n || self.moduli.iter().any(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.moduli.len(),
            });
        }
        let cycles = self
            .cycles
            .iter()
            .map(|c| MProduct {
                indices: c.indices.clone(),
                value: unpack(c.value),
            })
            .collect();
        DeterminingSet::new(self.n, self.norms.clone(), self.moduli.concat(), cycles)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessFile {
    Entry {
        row: usize,
        col: usize,
    },
    Cycle {
        indices: Vec<usize>,
        left: Complex,
        right: Complex,
    },
    SearchExhausted {
        nodes: u64,
    },
}

impl From<&Witness> for WitnessFile {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Entry { row, col } => WitnessFile::Entry {
                row: *row,
                col: *col,
            },
            Witness::Cycle {
                indices,
                left,
                right,
            } => WitnessFile::Cycle {
                indices: indices.clone(),
                left: pack(*left),
                right: pack(*right),
            },
            Witness::SearchExhausted { nodes } => WitnessFile::SearchExhausted { nodes: *nodes },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QRecipeFile {
    pub domain: Vec<usize>,
    pub image: Vec<usize>,
    pub scalars: Vec<Complex>,
}

impl From<&QRecipe> for QRecipeFile {
    fn from(q: &QRecipe) -> Self {
        QRecipeFile {
            domain: q.domain.clone(),
            image: q.image.clone(),
            scalars: q.scalars.iter().copied().map(pack).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Decided,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictFile {
    pub equivalent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phases: Option<Vec<Complex>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q_recipe: Option<QRecipeFile>,
    pub status: Status,
}

fn phases(c: &Option<PhaseVector>) -> Option<Vec<Complex>> {
    c.as_ref()
        .map(|c| c.as_slice().iter().copied().map(pack).collect())
}

impl VerdictFile {
    pub fn from_verdict(v: &Verdict) -> Self {
        VerdictFile {
            equivalent: Some(v.equivalent),
            phases: phases(&v.phases),
            permutation: v.permutation.clone(),
            witness: v.witness.as_ref().map(WitnessFile::from),
            q_recipe: None,
            status: Status::Decided,
        }
    }

    pub fn from_similarity(v: &SimilarityVerdict) -> Self {
        VerdictFile {
            equivalent: Some(v.similar),
            phases: phases(&v.phases),
            permutation: None,
            witness: v.witness.as_ref().map(WitnessFile::from),
            q_recipe: v.q_recipe.as_ref().map(QRecipeFile::from),
            status: Status::Decided,
        }
    }

    pub fn unknown(nodes: u64) -> Self {
        VerdictFile {
            equivalent: None,
            phases: None,
            permutation: None,
            witness: Some(WitnessFile::SearchExhausted { nodes }),
            q_recipe: None,
            status: Status::Unknown,
        }
    }
}

/// Frames or Gramians, told apart by their keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Frame(FrameFile),
    Gram(GramFile),
}

#[derive(Debug)]
pub enum ReadError {
    Io(std::io::Error),
    Parse(String),
    Invalid(Error),
}

impl std::fmt::Display for ReadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReadError::Io(e) => write!(f, "{e}"),
            ReadError::Parse(e) => write!(f, "parse error: {e}"),
            ReadError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ReadError {}

impl From<Error> for ReadError {
    fn from(e: Error) -> Self {
        ReadError::Invalid(e)
    }
}

pub fn parse_input(text: &str) -> Result<Input, ReadError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ReadError::Parse(e.to_string()))?;
    let is = |key: &str| value.get(key).is_some();
    let parsed = if is("vectors") {
        serde_json::from_value(value).map(Input::Frame)
    } else if is("entries") {
        serde_json::from_value(value).map(Input::Gram)
    } else {
        return Err(ReadError::Parse(
            "expected a frame (\"vectors\") or a Gramian (\"entries\")".into(),
        ));
    };
    parsed.map_err(|e| ReadError::Parse(e.to_string()))
}

pub fn parse_products(text: &str) -> Result<ProductsFile, ReadError> {
    serde_json::from_str(text).map_err(|e| ReadError::Parse(e.to_string()))
}

impl Input {
    pub fn gram(&self, tol: &Tolerance) -> Result<GramMatrix, Error> {
        match self {
            Input::Frame(f) => Ok(frameq_core::gram(&f.to_frame()?)),
            Input::Gram(g) => g.to_gram(tol),
        }
    }

    pub fn frame(&self, tol: &Tolerance) -> Result<Frame, Error> {
        match self {
            Input::Frame(f) => f.to_frame(),
            Input::Gram(g) => frameq_core::vectors_from_gram(&g.to_gram(tol)?, tol),
        }
    }
}

pub const CENSUS_HEADER: [&str; 8] = [
    "n",
    "d",
    "translation_orbits",
    "automorphism_orbits",
    "affine_orbits",
    "exact_unitary",
    "exact_projective",
    "status",
];

/// CSV fields of a census row; exact counts are empty when not computed and
/// `lo..hi` when undecided. Anomalies are appended to the status.
pub fn census_record(row: &CensusRow) -> [String; 8] {
    let count =
        |c: Option<frameq_core::harmonic::ClassCount>| c.map(|c| c.to_string()).unwrap_or_default();
    let mut status = row.status().to_string();
    for a in anomalies(row) {
        status.push_str(&format!(": {a}"));
    }
    [
        row.n.to_string(),
        row.d.to_string(),
        row.translation_orbits.to_string(),
        row.automorphism_orbits.to_string(),
        row.affine_orbits.to_string(),
        count(row.exact_unitary),
        count(row.exact_projective),
        status,
    ]
}

pub fn census_json(row: &CensusRow) -> Value {
    let count = |c: Option<frameq_core::harmonic::ClassCount>| match c {
        None => Value::Null,
        Some(c) => match c.exact() {
            Some(x) => Value::from(x),
            None => serde_json::json!({ "lo": c.lo, "hi": c.hi }),
        },
    };
    let flags: Vec<String> = anomalies(row).iter().map(ToString::to_string).collect();
    let mut m = BTreeMap::new();
    m.insert("n", Value::from(row.n));
    m.insert("d", Value::from(row.d));
    m.insert("translation_orbits", Value::from(row.translation_orbits));
    m.insert("automorphism_orbits", Value::from(row.automorphism_orbits));
    m.insert("affine_orbits", Value::from(row.affine_orbits));
    m.insert("exact_unitary", count(row.exact_unitary));
    m.insert("exact_projective", count(row.exact_projective));
    m.insert("status", Value::from(row.status()));
    m.insert("anomalies", Value::from(flags));
    serde_json::to_value(m).expect("map of JSON values")
}
