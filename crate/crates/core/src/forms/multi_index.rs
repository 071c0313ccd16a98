//! Strictly increasing multi-indices and wedge signs.

use std::fmt;

/// A strictly increasing set of 0-based indices, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// From 0-based entries; `None` if an entry repeats.
    pub fn new(entries: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        for &e in entries {
            assert!(e < 32);
            if bits & (1 << e) != 0 {
                return None;
            }
            bits |= 1 << e;
        }
        Some(MultiIndex(bits))
    }

    pub fn from_bits(bits: u32) -> Self {
        MultiIndex(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 & (1 << j) != 0
    }

    pub fn entries(self) -> Vec<usize> {
        (0..32).filter(|&j| self.contains(j)).collect()
    }

    /// Number of entries strictly below `j`.
    pub fn count_below(self, j: usize) -> usize {
        (self.0 & ((1u32 << j) - 1)).count_ones() as usize
    }

    pub fn remove(self, j: usize) -> Self {
        MultiIndex(self.0 & !(1 << j))
    }

    pub fn union(self, other: MultiIndex) -> Self {
        MultiIndex(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: MultiIndex) -> bool {
        self.0 & other.0 == 0
    }

    /// Shifts every entry up by `k`.
    pub fn shifted(self, k: usize) -> Self {
        MultiIndex(self.0 << k)
    }

    /// Parses 1-based comma-separated entries such as `"1,3"`; the empty string is the scalar index.
    pub fn parse(s: &str, n: usize) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Some(MultiIndex::EMPTY);
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let j: usize = part.trim().parse().ok()?;
            if j == 0 || j > n {
                return None;
            }
            entries.push(j - 1);
        }
        let sorted = entries.windows(2).all(|w| w[0] < w[1]);
        if !sorted {
            return None;
        }
        MultiIndex::new(&entries)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// 1-based, e.g. `(1,3)`.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries().iter().map(|j| (j + 1).to_string()).collect();
        write!(f, "({})", e.join(","))
    }
}

/// `dzbar_j ^ dzbar_J = sign * dzbar_{J + j}`; sign 0 (and `J` unchanged) when `j` is in `J`.
pub fn wedge_sign(jj: MultiIndex, j: usize) -> (i32, MultiIndex) {
    if jj.contains(j) {
        return (0, jj);
    }
    let sign = if jj.count_below(j) % 2 == 0 { 1 } else { -1 };
    (sign, MultiIndex(jj.0 | (1 << j)))
}

/// Sign of `dx_A ^ dx_B` relative to `dx_{A+B}` (0 if they overlap).
pub fn merge_sign(a: MultiIndex, b: MultiIndex) -> i32 {
    if !a.is_disjoint(b) {
        return 0;
    }
    // inversions: pairs (i in a, j in b) with j < i
    let inv: usize = a.entries().iter().map(|&i| b.count_below(i)).sum();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All increasing multi-indices of length `q` in `0..n`, in lexicographic order.
pub fn combos(n: usize, q: usize) -> Vec<MultiIndex> {
    fn rec(start: usize, n: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if cur.len() == q {
            out.push(MultiIndex::new(cur).unwrap());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if q <= n {
        rec(0, n, q, &mut Vec::new(), &mut out);
    }
    out
}

/// Position of `jj` in [`combos`]`(n, jj.len())`.
pub fn rank(n: usize, jj: MultiIndex) -> usize {
    // lexicographic rank via the combinatorial number system
    let e = jj.entries();
    let q = e.len();
    let mut r = 0;
    let mut prev = 0;
    for (i, &ei) in e.iter().enumerate() {
        for j in prev..ei {
            r += binomial(n - j - 1, q - i - 1);
        }
        prev = ei + 1;
    }
    r
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[usize]) -> MultiIndex {
        MultiIndex::new(e).unwrap()
    }

    #[test]
    fn wedge_sign_examples() {
        // 1-based (2), j=1 -> +1, (1,2)
        assert_eq!(wedge_sign(mi(&[1]), 0), (1, mi(&[0, 1])));
        assert_eq!(wedge_sign(mi(&[0]), 0).0, 0);
        // (1,3), j=2 -> -1, (1,2,3)
        assert_eq!(wedge_sign(mi(&[0, 2]), 1), (-1, mi(&[0, 1, 2])));
    }

    #[test]
    fn rank_matches_combos() {
        for n in 1..=6 {
            for q in 0..=n {
                for (i, c) in combos(n, q).into_iter().enumerate() {
                    assert_eq!(rank(n, c), i);
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(MultiIndex::parse("1,3", 3), Some(mi(&[0, 2])));
        assert_eq!(MultiIndex::parse("", 3), Some(MultiIndex::EMPTY));
        assert_eq!(MultiIndex::parse("3,1", 3), None);
        assert_eq!(MultiIndex::parse("4", 3), None);
        assert_eq!(mi(&[0, 2]).to_string(), "(1,3)");
    }

    #[test]
    fn merge_sign_counts_inversions() {
        assert_eq!(merge_sign(mi(&[1]), mi(&[0])), -1);
        assert_eq!(merge_sign(mi(&[0]), mi(&[1, 2])), 1);
        assert_eq!(merge_sign(mi(&[2]), mi(&[0, 1])), 1);
        assert_eq!(merge_sign(mi(&[1, 2]), mi(&[0])), 1);
        assert_eq!(merge_sign(mi(&[1]), mi(&[0, 2])), -1);
    }
}
