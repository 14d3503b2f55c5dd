use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{GaussError, Poly, PolyGaussian};
use crate::C64;

#[derive(Serialize, Deserialize)]
struct Wire {
    dim: usize,
    poly: Vec<(Vec<u32>, f64, f64)>,
    #[serde(rename = "A")]
    a: Vec<[f64; 2]>,
    b: Vec<[f64; 2]>,
    c: [f64; 2],
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn cplx(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

/// JSON with fields `dim`, `poly`, `A` (row-major), `b`, `c`; floats round-trip bit-exactly.
pub fn to_json(f: &PolyGaussian) -> String {
    let m = 2 * f.dim();
    let wire = Wire {
        dim: f.dim(),
        poly: f.poly().terms().map(|(e, c)| (e.clone(), c.re, c.im)).collect(),
        a: (0..m * m).map(|k| pair(f.a()[(k / m, k % m)])).collect(),
        b: f.b().iter().map(|&z| pair(z)).collect(),
        c: pair(f.c()),
    };
    serde_json::to_string(&wire).expect("serializing plain numbers cannot fail")
}

pub fn from_json(s: &str) -> Result<PolyGaussian, GaussError> {
    let wire: Wire = serde_json::from_str(s).map_err(|e| GaussError::Json(e.to_string()))?;
    let m = 2 * wire.dim;
    if wire.a.len() != m * m || wire.b.len() != m {
        return Err(GaussError::Json(format!("expected {} matrix entries and {} vector entries", m * m, m)));
    }
    let mut poly = Poly::zero(m);
    for (e, re, im) in wire.poly {
        if e.len() != m {
            return Err(GaussError::Json(format!("multi-index of length {} in dimension {}", e.len(), wire.dim)));
        }
        poly.add_term(e, C64::new(re, im));
    }
    let a = DMatrix::from_fn(m, m, |i, j| cplx(wire.a[i * m + j]));
    if a != a.transpose() {
        return Err(GaussError::Json("A is not symmetric".into()));
    }
    let b = DVector::from_iterator(m, wire.b.into_iter().map(cplx));
    PolyGaussian::new(wire.dim, poly, a, b, cplx(wire.c))
}
