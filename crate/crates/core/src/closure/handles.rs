use std::sync::Arc;

use crate::error::Result;
use crate::exactmath::{rational_roots, NumberField, QPoly, Rational};

/// The squarefree polynomial in `x` whose roots a point stands for.
pub fn handle_poly(field: &NumberField) -> QPoly {
    field.modulus().clone()
}

pub(crate) fn handle_key(field: &Arc<NumberField>) -> (usize, Vec<Rational>) {
    (field.degree(), field.modulus().coeffs().to_vec())
}

fn field_of(p: &QPoly) -> Result<Arc<NumberField>> {
    let p = p.monic_q();
    if p.degree() == Some(1) {
        Ok(NumberField::rational_point(&-p.coeffs()[0].clone()))
    } else {
        NumberField::new(&p, "a")
    }
}

/// One point per factor, in the canonical order.
pub fn point_handles(factors: &[QPoly]) -> Result<Vec<Arc<NumberField>>> {
    let mut out = factors.iter().map(field_of).collect::<Result<Vec<_>>>()?;
    out.sort_by_key(handle_key);
    Ok(out)
}

/// Rational roots of a squarefree polynomial as separate points, the rest
/// as one point handled by dynamic evaluation.
pub fn singular_handles(s: &QPoly) -> Result<Vec<Arc<NumberField>>> {
    if s.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let mut rest = s.monic_q();
    let mut factors = Vec::new();
    for (a, _) in rational_roots(&rest)? {
        let lin = QPoly::linear_root(&a);
        rest = rest.divrem_q(&lin).0;
        factors.push(lin);
    }
    if rest.degree().unwrap_or(0) > 0 {
        factors.push(rest);
    }
    point_handles(&factors)
}
