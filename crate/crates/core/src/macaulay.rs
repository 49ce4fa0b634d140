//! Monomial column ordering and Macaulay matrix assembly.
//!
//! Columns are grouped by total degree, highest first; within a degree block
//! monomials ascend lexicographically in `(e_1, ..., e_n)`. For two variables
//! `(x, y)` at degree 3 this gives `y^3, xy^2, x^2y, x^3, y^2, xy, x^2, y, x, 1`.
//!
//! Rows are the products `x^m p_i`, ordered by multiplier degree, then
//! polynomial index, then multiplier position in the column order.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::combinatorics::monomials_eq;
use crate::error::{Error, Result};
use crate::poly::{Exponent, PolySystem};

/// All exponents of total degree exactly `k` in `n` variables, ascending
/// lexicographically.
pub fn monomials_of_degree(n: usize, k: u32) -> Vec<Exponent> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(k);
            out.push(Exponent::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in 0..=k {
            prefix.push(first);
            rec(n, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Ordered monomial labels for the columns of `Mac(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnOrder {
    n: usize,
    d: u32,
    labels: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl ColumnOrder {
    pub fn new(n: usize, d: u32) -> Self {
        let labels: Vec<Exponent> = (0..=d)
            .rev()
            .flat_map(|k| monomials_of_degree(n, k))
            .collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        ColumnOrder {
            n,
            d,
            labels,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn labels(&self) -> &[Exponent] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of degree-`d` columns, which come first.
    pub fn cut(&self) -> usize {
        monomials_eq(self.n, self.d as i64) as usize
    }

    /// Column position of a monomial, if it has degree at most `d`.
    pub fn position(&self, e: &Exponent) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Vector of all column monomials evaluated at `z`.
    pub fn evaluate(&self, z: &[Complex64]) -> DVector<Complex64> {
        DVector::from_iterator(self.labels.len(), self.labels.iter().map(|e| e.eval(z)))
    }
}

/// Origin of a Macaulay row: the product `multiplier * p_{poly}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowLabel {
    pub poly: usize,
    pub multiplier: Exponent,
}

#[derive(Debug, Clone)]
pub struct MacaulayMatrix {
    pub data: DMatrix<Complex64>,
    pub order: ColumnOrder,
    pub row_labels: Vec<RowLabel>,
}

impl MacaulayMatrix {
    pub fn degree(&self) -> u32 {
        self.order.degree()
    }

    pub fn cut(&self) -> usize {
        self.order.cut()
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    /// Columns of the degree-`d` monomials.
    pub fn high_block(&self) -> DMatrix<Complex64> {
        self.data.columns(0, self.cut()).into_owned()
    }

    /// Columns of the monomials of degree below `d`.
    pub fn low_block(&self) -> DMatrix<Complex64> {
        let cut = self.cut();
        self.data.columns(cut, self.ncols() - cut).into_owned()
    }

    /// CSV dump with monomial column headers and a leading row-label column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for e in self.order.labels() {
            let _ = write!(out, ",{e}");
        }
        out.push('\n');
        for (r, label) in self.row_labels.iter().enumerate() {
            let _ = write!(out, "{}*p{}", label.multiplier, label.poly + 1);
            for c in 0..self.ncols() {
                let v = self.data[(r, c)];
                if v.im == 0.0 {
                    let _ = write!(out, ",{}", v.re);
                } else {
                    let _ = write!(out, ",{}{:+}i", v.re, v.im);
                }
            }
            out.push('\n');
        }
        out
    }
}

fn row_for(sys: &PolySystem, poly: usize, m: &Exponent, order: &ColumnOrder) -> Vec<(usize, Complex64)> {
    sys.polys()[poly]
        .terms()
        .map(|(e, c)| {
            let pos = order
                .position(&e.mul(m))
                .expect("product degree within Macaulay degree");
            (pos, *c)
        })
        .collect()
}

/// Assembles `Mac(d)` for the system.
pub fn build_macaulay(sys: &PolySystem, d: u32) -> Result<MacaulayMatrix> {
    let degrees = sys.degrees();
    let max_deg = *degrees.iter().max().unwrap();
    if d < max_deg {
        return Err(Error::InvalidInput(format!(
            "Macaulay degree {d} is below the maximum polynomial degree {max_deg}"
        )));
    }
    let n = sys.n();
    let order = ColumnOrder::new(n, d);
    let mut labels = Vec::new();
    for mdeg in 0..=d {
        for (i, &b) in degrees.iter().enumerate() {
            if mdeg + b > d {
                continue;
            }
            for m in monomials_of_degree(n, mdeg) {
                labels.push(RowLabel { poly: i, multiplier: m });
            }
        }
    }
    let mut data = DMatrix::zeros(labels.len(), order.len());
    for (r, label) in labels.iter().enumerate() {
        for (c, v) in row_for(sys, label.poly, &label.multiplier, &order) {
            data[(r, c)] = v;
        }
    }
    Ok(MacaulayMatrix {
        data,
        order,
        row_labels: labels,
    })
}

/// Blocks of the one-degree extension
/// `Mac(k+1) = [[0, Mac(k)], [A, B]]`.
#[derive(Debug, Clone)]
pub struct Extension {
    /// New rows restricted to the new degree-`(k+1)` columns.
    pub a: DMatrix<Complex64>,
    /// New rows restricted to the old columns of `Mac(k)`.
    pub b: DMatrix<Complex64>,
    /// The assembled `Mac(k+1)`: rows of `Mac(k)` followed by the new rows.
    pub mac: MacaulayMatrix,
}

/// Extends `Mac(k)` to `Mac(k+1)`.
///
/// New rows with a nonconstant multiplier are obtained by shifting an
/// existing row of `Mac(k)` by one variable; only products `1 * p_i` with
/// `deg p_i = k + 1` are read from the polynomials themselves.
pub fn extend_blocks(mac_k: &MacaulayMatrix, sys: &PolySystem, target_degree: u32) -> Result<Extension> {
    let k = mac_k.degree();
    if k + 1 > target_degree {
        return Err(Error::InvalidInput(format!(
            "cannot extend Mac({k}) beyond the target degree {target_degree}"
        )));
    }
    let n = sys.n();
    let degrees = sys.degrees();
    let order = ColumnOrder::new(n, k + 1);
    let fresh = order.cut();
    let old_cols = mac_k.ncols();
    debug_assert_eq!(fresh + old_cols, order.len());

    let row_of: HashMap<&RowLabel, usize> = mac_k
        .row_labels
        .iter()
        .enumerate()
        .map(|(r, l)| (l, r))
        .collect();
    // Column map of multiplication by x_j from the old order into the new one.
    let shift: Vec<Vec<usize>> = (0..n)
        .map(|j| {
            mac_k
                .order
                .labels()
                .iter()
                .map(|e| order.position(&e.shifted(j)).unwrap())
                .collect()
        })
        .collect();

    let mut new_labels = Vec::new();
    for (i, &b) in degrees.iter().enumerate() {
        if b > k + 1 {
            continue;
        }
        for m in monomials_of_degree(n, k + 1 - b) {
            new_labels.push(RowLabel { poly: i, multiplier: m });
        }
    }
    // Keep the global row ordering: multiplier degree, then poly index.
    new_labels.sort_by(|x, y| {
        x.multiplier
            .total_degree()
            .cmp(&y.multiplier.total_degree())
            .then(x.poly.cmp(&y.poly))
            .then_with(|| x.multiplier.cmp(&y.multiplier))
    });

    let mut new_rows = DMatrix::zeros(new_labels.len(), order.len());
    for (r, label) in new_labels.iter().enumerate() {
        match label.multiplier.exps().iter().position(|&e| e > 0) {
            None => {
                for (c, v) in row_for(sys, label.poly, &label.multiplier, &order) {
                    new_rows[(r, c)] = v;
                }
            }
            Some(j) => {
                let mut exps = label.multiplier.exps().to_vec();
                exps[j] -= 1;
                let parent = RowLabel {
                    poly: label.poly,
                    multiplier: Exponent::new(exps),
                };
                let src = *row_of
                    .get(&parent)
                    .expect("parent row present in lower-degree Macaulay matrix");
                for c in 0..old_cols {
                    let v = mac_k.data[(src, c)];
                    if v != Complex64::new(0.0, 0.0) {
                        new_rows[(r, shift[j][c])] = v;
                    }
                }
            }
        }
    }

    let a = new_rows.columns(0, fresh).into_owned();
    let b = new_rows.columns(fresh, old_cols).into_owned();

    let total = mac_k.nrows() + new_labels.len();
    let mut data = DMatrix::zeros(total, order.len());
    data.view_mut((0, fresh), (mac_k.nrows(), old_cols))
        .copy_from(&mac_k.data);
    data.view_mut((mac_k.nrows(), 0), (new_labels.len(), order.len()))
        .copy_from(&new_rows);
    let mut labels = mac_k.row_labels.clone();
    labels.extend(new_labels);

    Ok(Extension {
        a,
        b,
        mac: MacaulayMatrix {
            data,
            order,
            row_labels: labels,
        },
    })
}
