//! Cohomology of band bundles on a cycle of projective lines, suitability and
//! generic spannedness, cohomology of Atiyah bundles on an elliptic curve, and
//! a direct linear-algebra computation used to cross-check the formulas.

use num_integer::Integer;
use serde_json::{json, Value};

use crate::band::{build_gluing, BandDatum, GluingData};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CohomDims {
    pub h0: usize,
    pub h1: usize,
}

impl CohomDims {
    pub fn euler(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64
    }

    pub fn to_json(&self) -> Value {
        json!({ "h0": self.h0, "h1": self.h1 })
    }
}

pub fn pos_part(a: i64) -> i64 {
    a.max(0)
}

pub fn neg_part(a: i64) -> i64 {
    (-a).max(0)
}

/// A maximal cyclic run of nonnegative entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivePart {
    /// 0-based offset of the first entry.
    pub start: usize,
    pub length: usize,
    pub entries: Vec<i64>,
}

pub fn positive_parts(d: &[i64]) -> Vec<PositivePart> {
    let n = d.len();
    if n == 0 {
        return Vec::new();
    }
    if d.iter().all(|&x| x >= 0) {
        return vec![PositivePart { start: 0, length: n, entries: d.to_vec() }];
    }
    let mut parts = Vec::new();
    for k in 0..n {
        if d[k] >= 0 && d[(k + n - 1) % n] < 0 {
            let mut entries = Vec::new();
            let mut j = k;
            while d[j % n] >= 0 {
                entries.push(d[j % n]);
                j += 1;
            }
            parts.push(PositivePart { start: k, length: entries.len(), entries });
        }
    }
    parts
}

/// `θ(d) = Σ_p θ(p)` over positive parts, `θ(p) = l` for a whole-cycle or
/// all-zero part of length `l`, `l + 1` otherwise.
pub fn theta(d: &[i64]) -> usize {
    positive_parts(d)
        .iter()
        .map(|p| if p.length == d.len() || p.entries.iter().all(|&x| x == 0) { p.length } else { p.length + 1 })
        .sum()
}

pub fn cohomology(b: &BandDatum) -> Result<CohomDims> {
    b.validate()?;
    let m = b.m as i64;
    let rs = b.d.len() as i64;
    let th = theta(&b.d) as i64;
    let delta = i64::from(b.d.iter().all(|&x| x == 0) && b.lambda.is_one());
    let plus: i64 = b.d.iter().map(|&x| pos_part(x + 1)).sum();
    let minus: i64 = b.d.iter().map(|&x| neg_part(x + 1)).sum();
    let h0 = m * (plus - th) + delta;
    let h1 = m * (minus + rs - th) + delta;
    debug_assert!(h0 >= 0 && h1 >= 0);
    Ok(CohomDims { h0: h0 as usize, h1: h1 as usize })
}

/// `d > 0` with no cyclic window `(0, 1, …, 1, 0)` and no rotation equal to
/// `(0, 1, …, 1)`.
pub fn is_suitable(d: &[i64]) -> bool {
    let n = d.len();
    if n == 0 || d.iter().any(|&x| x < 0) || d.iter().all(|&x| x == 0) {
        return false;
    }
    for i in (0..n).filter(|&i| d[i] == 0) {
        // Walk over ones; a window must not come back to the zero it started
        // from.
        let mut j = 1;
        while j < n && d[(i + j) % n] == 1 {
            j += 1;
        }
        if j < n && d[(i + j) % n] == 0 {
            return false;
        }
    }
    let zeros = d.iter().filter(|&&x| x == 0).count();
    let others_one = d.iter().all(|&x| x == 0 || x == 1);
    !(zeros == 1 && others_one)
}

pub fn is_generically_spanned(b: &BandDatum) -> Result<bool> {
    b.validate()?;
    let trivial = b.d.iter().all(|&x| x == 0) && b.m == 1 && b.lambda.is_one();
    Ok(trivial || is_suitable(&b.d))
}

/// Cohomology computed directly from the gluing data.
///
/// Sections of `⊕ O(d_j)^m` on the normalization are polynomials of degree
/// `≤ d_j` per strand copy; the value at the left point is the constant
/// coefficient and at the right point the top one. `h⁰` is the dimension of
/// the sections satisfying every node identification, and `h¹` comes from the
/// normalization sequence: `h¹(ν*V)` plus the cokernel of the evaluation map
/// to the node fibres.
pub fn cech_oracle(g: &GluingData) -> CohomDims {
    let field = g.nodes.first().map(|n| n.matrix.field()).expect("at least one node");
    let m = g.m;
    let rs = g.degrees.len();
    let mut offset = vec![0usize; rs + 1];
    for (j, &d) in g.degrees.iter().enumerate() {
        let coeffs = if d >= 0 { d as usize + 1 } else { 0 };
        offset[j + 1] = offset[j] + m * coeffs;
    }
    let unknowns = offset[rs];
    let var = |j: usize, copy: usize, left: bool| -> Option<usize> {
        let d = g.degrees[j];
        if d < 0 {
            return None;
        }
        let per = d as usize + 1;
        Some(offset[j] + copy * per + if left { 0 } else { d as usize })
    };
    let mut rows = Vec::new();
    for node in &g.nodes {
        let r = node.strands.len();
        for (t_out, &j_out) in node.strands.iter().enumerate() {
            let j_in = j_out % rs;
            for b_copy in 0..m {
                // left value of (j_in, b_copy) = Σ_a M[a][b] · right value of a
                let mut row = vec![field.zero(); unknowns];
                if let Some(v) = var(j_in, b_copy, true) {
                    row[v] = field.one();
                }
                let bcol = t_out * m + b_copy;
                for (t_src, &j_src) in node.strands.iter().enumerate() {
                    for a_copy in 0..m {
                        let coef = node.matrix.get(t_src * m + a_copy, bcol);
                        if coef.is_zero() {
                            continue;
                        }
                        if let Some(v) = var(j_src - 1, a_copy, false) {
                            row[v] = &row[v] - coef;
                        }
                    }
                }
                rows.push(row);
            }
        }
        debug_assert_eq!(node.matrix.rows(), r * m);
    }
    let equations = rows.len();
    let rank = if unknowns == 0 { 0 } else { Matrix::from_rows(field, unknowns, rows).unwrap().rank() };
    let h0 = unknowns - rank;
    let h1_normalization: usize = g.degrees.iter().map(|&d| m * neg_part(d + 1) as usize).sum();
    CohomDims { h0, h1: h1_normalization + equations - rank }
}

/// Convenience wrapper: `cech_oracle(build_gluing(b))`.
pub fn cech_cohomology(b: &BandDatum) -> Result<CohomDims> {
    Ok(cech_oracle(&build_gluing(b)?))
}

/// Cohomology of the Atiyah bundle `P_{r,d}` twisted at `n·x` on a smooth
/// elliptic curve; `at_origin` says whether `x` is the origin.
pub fn atiyah_cohom(r: i64, d: i64, n: i64, at_origin: bool) -> Result<CohomDims> {
    if r <= 0 || n < 1 {
        return Err(Error::RangeViolation(format!("need r > 0 and n >= 1, got r = {r}, n = {n}")));
    }
    if r.gcd(&d) != 1 {
        return Err(Error::NotCoprime { r, d });
    }
    let special = usize::from(d == 0 && at_origin);
    let h0 = if d > 0 { (n * d) as usize } else { special };
    let h1 = if d < 0 { (n * -d) as usize } else { special };
    Ok(CohomDims { h0, h1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn band(field: Field, s: usize, d: &[i64], m: usize, l: i64) -> BandDatum {
        BandDatum::new(s, d.to_vec(), m, field.from_i64(l)).unwrap()
    }

    #[test]
    fn parts_of_numbers() {
        assert_eq!((pos_part(3), neg_part(3)), (3, 0));
        assert_eq!((pos_part(0), neg_part(0)), (0, 0));
        assert_eq!((pos_part(-2), neg_part(-2)), (0, 2));
    }

    #[test]
    fn positive_part_scan() {
        let p = positive_parts(&[1, -1, 2, 0, -1]);
        assert_eq!(p, vec![
            PositivePart { start: 0, length: 1, entries: vec![1] },
            PositivePart { start: 2, length: 2, entries: vec![2, 0] },
        ]);
        assert_eq!(positive_parts(&[0, 3]).len(), 1);
        assert!(positive_parts(&[-1, -4]).is_empty());
        // a run may wrap around the end
        let w = positive_parts(&[2, -1, 3]);
        assert_eq!(w, vec![PositivePart { start: 2, length: 2, entries: vec![3, 2] }]);
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(&[0, 0, 0]), 3);
        assert_eq!(theta(&[1, -1]), 2);
        assert_eq!(theta(&[-1, -3]), 0);
        assert_eq!(theta(&[0, -1, 0, 0, -2]), 3);
    }

    #[test]
    fn formula_examples() {
        let q = Field::Rational;
        assert_eq!(cohomology(&band(q, 1, &[0], 1, 1)).unwrap(), CohomDims { h0: 1, h1: 1 });
        assert_eq!(cohomology(&band(q, 1, &[2], 1, 5)).unwrap(), CohomDims { h0: 2, h1: 0 });
        assert_eq!(cohomology(&band(q, 1, &[-1], 1, 2)).unwrap(), CohomDims { h0: 0, h1: 1 });
        assert_eq!(cohomology(&band(q, 1, &[0], 2, 1)).unwrap(), CohomDims { h0: 1, h1: 1 });
        assert_eq!(cohomology(&band(q, 1, &[0], 2, 3)).unwrap(), CohomDims { h0: 0, h1: 0 });
    }

    #[test]
    fn oracle_examples() {
        let q = Field::Rational;
        assert_eq!(cech_cohomology(&band(q, 1, &[0], 1, 1)).unwrap(), CohomDims { h0: 1, h1: 1 });
        assert_eq!(cech_cohomology(&band(q, 1, &[2], 1, 1)).unwrap(), CohomDims { h0: 2, h1: 0 });
        let c = cech_cohomology(&band(q, 2, &[1, 1], 1, 4)).unwrap();
        assert_eq!(c.euler(), 2);
        // a Jordan block with eigenvalue 1 keeps exactly one constant section
        assert_eq!(cech_cohomology(&band(q, 1, &[0], 3, 1)).unwrap(), CohomDims { h0: 1, h1: 1 });
    }

    #[test]
    fn formula_matches_oracle_on_small_cases() {
        for field in [Field::Rational, Field::Prime(7)] {
            for s in 1..=3 {
                for len in [s, 2 * s].into_iter().filter(|&l| l <= 4) {
                    let mut d = vec![-2i64; len];
                    loop {
                        for m in 1..=2 {
                            for l in [1, 2] {
                                if let Ok(b) = BandDatum::new(s, d.clone(), m, field.from_i64(l)) {
                                    assert_eq!(cohomology(&b).unwrap(), cech_cohomology(&b).unwrap(), "{b:?}");
                                }
                            }
                        }
                        let mut i = 0;
                        while i < len && d[i] == 2 {
                            d[i] = -2;
                            i += 1;
                        }
                        if i == len {
                            break;
                        }
                        d[i] += 1;
                    }
                }
            }
        }
    }

    #[test]
    fn suitability() {
        assert!(is_suitable(&[2, 3]));
        assert!(!is_suitable(&[0, 1, 1, 0, 2]));
        assert!(!is_suitable(&[1, 1, 0]));
        assert!(!is_suitable(&[0, 0, 3]));
        assert!(!is_suitable(&[0, 2, 0]));
        assert!(is_suitable(&[0, 2]));
        assert!(is_suitable(&[0, 2, 1]));
        assert!(!is_suitable(&[0, 1]));
        assert!(!is_suitable(&[0]));
        assert!(!is_suitable(&[3, -1]));
    }

    #[test]
    fn generic_spannedness() {
        let q = Field::Rational;
        assert!(is_generically_spanned(&band(q, 1, &[0], 1, 1)).unwrap());
        assert!(!is_generically_spanned(&band(q, 1, &[0], 2, 1)).unwrap());
        assert!(is_generically_spanned(&band(q, 1, &[2, 3], 3, 4)).unwrap());
    }

    #[test]
    fn atiyah_values() {
        assert_eq!(atiyah_cohom(2, 3, 1, false).unwrap(), CohomDims { h0: 3, h1: 0 });
        assert_eq!(atiyah_cohom(1, 0, 1, true).unwrap(), CohomDims { h0: 1, h1: 1 });
        assert_eq!(atiyah_cohom(1, 0, 1, false).unwrap(), CohomDims { h0: 0, h1: 0 });
        assert_eq!(atiyah_cohom(3, -2, 2, false).unwrap(), CohomDims { h0: 0, h1: 4 });
        assert!(matches!(atiyah_cohom(2, 4, 1, false), Err(Error::NotCoprime { .. })));
        assert!(matches!(atiyah_cohom(2, 0, 1, true), Err(Error::NotCoprime { .. })));
    }
}
