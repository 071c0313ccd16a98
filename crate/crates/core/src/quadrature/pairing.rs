//! Real expansion of the top-degree forms `dzetabar_L ^ dzeta_1 ^ ... ^ dzeta_n ^ dzetabar_K`.
//!
//! Real coordinates are ordered `x_1, y_1, ..., x_n, y_n` and `dV = dx_1 ^ dy_1 ^ ...`. A
//! `(2n-1)`-form `sum_m c_m dx_1 ^ .. (omit m) .. ^ dy_n` is `sum_m (-1)^m c_m i_{e_m} dV`, so
//! its integral over the boundary is the flux of the vector `((-1)^m c_m)_m`.

use num_complex::Complex64;

use crate::forms::multi_index::{combos, MultiIndex};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_dense(mut a: Vec<Vec<C>>) -> C {
    let k = a.len();
    let mut d = C::new(1.0, 0.0);
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        if a[piv][col] == ZERO {
            return ZERO;
        }
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= a[col][col];
        for i in col + 1..k {
            let f = a[i][col] / a[col][col];
            for j in col..k {
                let v = a[col][j];
                a[i][j] -= f * v;
            }
        }
    }
    d
}

fn one_form(n: usize, j: usize, bar: bool) -> Vec<C> {
    let mut row = vec![ZERO; 2 * n];
    row[2 * j] = C::new(1.0, 0.0);
    row[2 * j + 1] = C::new(0.0, if bar { -1.0 } else { 1.0 });
    row
}

/// Coefficients of `dzetabar_L ^ dzeta_{1..n} ^ dzetabar_K`: one entry (`dV`) when
/// `|L| + |K| = n`, or the `2n` flux components when `|L| + |K| = n - 1`.
pub fn real_expansion(n: usize, l: MultiIndex, k: MultiIndex) -> Vec<C> {
    let mut rows: Vec<Vec<C>> = l.entries().into_iter().map(|j| one_form(n, j, true)).collect();
    rows.extend((0..n).map(|j| one_form(n, j, false)));
    rows.extend(k.entries().into_iter().map(|j| one_form(n, j, true)));
    let deg = rows.len();
    if deg == 2 * n {
        return vec![det_dense(rows)];
    }
    assert_eq!(deg, 2 * n - 1, "form degree {deg} is neither 2n nor 2n-1");
    (0..2 * n)
        .map(|m| {
            let minor = rows.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != m).map(|(_, v)| *v).collect()).collect();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            det_dense(minor) * sign
        })
        .collect()
}

/// Real expansions for every `(L, K)` with `|L| = l_len`, `|K| = k_len`, in [`combos`] order.
#[derive(Clone, Debug)]
pub struct PairingTable {
    pub n: usize,
    pub l_len: usize,
    pub k_len: usize,
    /// `entries[b * nk + k]`.
    entries: Vec<Vec<C>>,
    nk: usize,
}

impl PairingTable {
    pub fn new(n: usize, l_len: usize, k_len: usize) -> Self {
        let ls = combos(n, l_len);
        let ks = combos(n, k_len);
        let mut entries = Vec::with_capacity(ls.len() * ks.len());
        for l in &ls {
            for k in &ks {
                entries.push(real_expansion(n, *l, *k));
            }
        }
        PairingTable { n, l_len, k_len, entries, nk: ks.len() }
    }

    pub fn is_boundary(&self) -> bool {
        self.l_len + self.k_len + 1 == self.n
    }

    pub fn nl(&self) -> usize {
        self.entries.len() / self.nk.max(1)
    }

    pub fn nk(&self) -> usize {
        self.nk
    }

    pub fn get(&self, b: usize, k: usize) -> &[C] {
        &self.entries[b * self.nk + k]
    }
}
