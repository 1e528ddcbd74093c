//! JSON export of braid matrices, over the Laurent ring or reduced mod a prime.
//!
//! A Laurent entry is `{"num": [[c, eq, es], ...], "den": [[1, 0, 0]]}`, meaning
//! `Σ c q^eq s^es` over the denominator. The parser accepts any unit
//! denominator `±q^a s^b`.

use serde::{Deserialize, Serialize};

use crate::highest::RepMatrices;
use crate::laurent::LaurentPoly2;
use crate::matrix::{LMatrix, ModMatrix};
use crate::special::Specialization;
use crate::QrepError;

pub const FORMAT: &str = "charquo-qrep";
pub const VERSION: u32 = 1;

const MAX_EXPONENT: i128 = 1 << 20;
const MAX_COEFFICIENT: i128 = 1 << 100;
const MAX_DIM: usize = 4096;
const MAX_STRANDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub num: Vec<[i128; 3]>,
    pub den: Vec<[i128; 3]>,
}

type MatrixJson = Vec<Vec<EntryJson>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportJson {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub ell: u32,
    pub dim: usize,
    pub generators: Vec<MatrixJson>,
    pub inverses: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecializedJson {
    pub format: String,
    pub version: u32,
    pub modulus: u64,
    pub q0: u64,
    pub s0: u64,
    pub n: usize,
    pub ell: u32,
    pub dim: usize,
    pub generators: Vec<Vec<Vec<u64>>>,
    pub inverses: Vec<Vec<Vec<u64>>>,
    pub j: Vec<Vec<u64>>,
}

fn entry(x: &LaurentPoly2) -> EntryJson {
    EntryJson {
        num: x.to_triples(),
        den: vec![[1, 0, 0]],
    }
}

fn matrix_json(m: &LMatrix) -> MatrixJson {
    m.to_rows().iter().map(|r| r.iter().map(entry).collect()).collect()
}

pub fn export(reps: &RepMatrices) -> ExportJson {
    ExportJson {
        format: FORMAT.into(),
        version: VERSION,
        n: reps.n,
        ell: reps.ell,
        dim: reps.dim(),
        generators: reps.gens.iter().map(matrix_json).collect(),
        inverses: reps.inverses.iter().map(matrix_json).collect(),
    }
}

pub fn export_specialized(sp: &Specialization) -> SpecializedJson {
    SpecializedJson {
        format: FORMAT.into(),
        version: VERSION,
        modulus: sp.r,
        q0: sp.q0,
        s0: sp.s0,
        n: sp.n,
        ell: sp.ell,
        dim: sp.j.n,
        generators: sp.gens.iter().map(ModMatrix::to_rows).collect(),
        inverses: sp.inverses.iter().map(ModMatrix::to_rows).collect(),
        j: sp.j.to_rows(),
    }
}

pub fn to_json_string<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

fn check_triples(v: &[[i128; 3]]) -> Result<(), QrepError> {
    for &[c, eq, es] in v {
        if c.unsigned_abs() > MAX_COEFFICIENT as u128 {
            return Err(QrepError::Parse(format!("coefficient {c} too large")));
        }
        if eq.unsigned_abs() > MAX_EXPONENT as u128 || es.unsigned_abs() > MAX_EXPONENT as u128 {
            return Err(QrepError::Parse(format!("exponent ({eq}, {es}) out of range")));
        }
    }
    Ok(())
}

fn decode_entry(e: &EntryJson) -> Result<LaurentPoly2, QrepError> {
    check_triples(&e.num)?;
    check_triples(&e.den)?;
    let num = LaurentPoly2::from_triples(&e.num)?;
    let den = LaurentPoly2::from_triples(&e.den)?;
    let inv = den
        .unit_inverse()
        .ok_or_else(|| QrepError::Parse(format!("denominator {den} is not a unit")))?;
    Ok(&num * &inv)
}

fn decode_matrix(m: &MatrixJson, dim: usize) -> Result<LMatrix, QrepError> {
    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
        return Err(QrepError::Shape(format!("expected a {dim} x {dim} matrix")));
    }
    let rows = m
        .iter()
        .map(|r| r.iter().map(decode_entry).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    LMatrix::from_rows(rows)
}

/// Parses and validates an export.
pub fn parse_export(text: &str) -> Result<RepMatrices, QrepError> {
    let raw: ExportJson = serde_json::from_str(text).map_err(|e| QrepError::Parse(e.to_string()))?;
    if raw.format != FORMAT || raw.version != VERSION {
        return Err(QrepError::Parse(format!("unsupported format {} v{}", raw.format, raw.version)));
    }
    if raw.n < 2 || raw.n > MAX_STRANDS {
        return Err(QrepError::Parse(format!("strand count {} out of range", raw.n)));
    }
    if raw.dim == 0 || raw.dim > MAX_DIM {
        return Err(QrepError::Parse(format!("dimension {} out of range", raw.dim)));
    }
    if raw.generators.len() != raw.n - 1 || raw.inverses.len() != raw.n - 1 {
        return Err(QrepError::Shape(format!("expected {} generators and inverses", raw.n - 1)));
    }
    let gens = raw
        .generators
        .iter()
        .map(|m| decode_matrix(m, raw.dim))
        .collect::<Result<Vec<_>, _>>()?;
    let inverses = raw
        .inverses
        .iter()
        .map(|m| decode_matrix(m, raw.dim))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RepMatrices {
        n: raw.n,
        ell: raw.ell,
        gens,
        inverses,
    })
}
