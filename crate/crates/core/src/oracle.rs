//! Brute-force reference answers computed straight from the definitions.
//!
//! Nothing here touches the scanner, the difference encoding, or the predecessor
//! structure. Quadratic time; meant for `n` up to a few thousand.

use crate::scanner::MinimalCooccurrence;
use crate::text::TokenId;

/// Everything the oracle knows about one `(S, Q)` pair.
///
/// Tables are indexed by window length and have `n + 1` entries; entry 0 is unused
/// and always 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub n: usize,
    pub co_table: Vec<u64>,
    pub lmco_table: Vec<u64>,
    pub minimal_list: Vec<MinimalCooccurrence>,
    pub r1: Option<usize>,
}

impl OracleResult {
    pub fn co(&self, w: u64) -> u64 {
        self.co_table.get(w as usize).copied().unwrap_or(0)
    }

    pub fn lmco(&self, w: u64) -> u64 {
        self.lmco_table.get(w as usize).copied().unwrap_or(0)
    }

    /// `delta(w) = lmco(w) - lmco(w - 1)`.
    pub fn delta(&self, w: u64) -> i64 {
        if w == 0 {
            return 0;
        }
        self.lmco(w) as i64 - self.lmco(w - 1) as i64
    }
}

struct Members<'a>(&'a [TokenId]);

impl Members<'_> {
    fn slot(&self, t: TokenId) -> Option<usize> {
        self.0.iter().position(|&m| m == t)
    }

    /// Whether `window` contains every member.
    fn covered_by(&self, window: &[TokenId]) -> bool {
        self.0.iter().all(|m| window.contains(m))
    }
}

fn distinct(query: &[TokenId]) -> Vec<TokenId> {
    let mut q = query.to_vec();
    q.sort_unstable();
    q.dedup();
    q
}

/// `co(w)` for every `w`, by sliding a window of each length with per-member counts.
pub fn oracle_co(s: &[TokenId], query: &[TokenId]) -> Vec<u64> {
    let q = distinct(query);
    let members = Members(&q);
    let n = s.len();
    let mut table = vec![0u64; n + 1];
    if q.is_empty() {
        return table;
    }
    for w in 1..=n {
        let mut counts = vec![0usize; q.len()];
        let mut present = 0;
        for (i, &t) in s.iter().enumerate() {
            if let Some(k) = members.slot(t) {
                if counts[k] == 0 {
                    present += 1;
                }
                counts[k] += 1;
            }
            if i >= w {
                if let Some(k) = members.slot(s[i - w]) {
                    counts[k] -= 1;
                    if counts[k] == 0 {
                        present -= 1;
                    }
                }
            }
            if i + 1 >= w && present == q.len() {
                table[w] += 1;
            }
        }
    }
    table
}

/// `lmco(w)` for every `w`, plus the minimal co-occurrences and `r1`.
///
/// For each end `k` the start is walked left until every member has been seen; that
/// window is the left-minimal one ending at `k`. It is also minimal when dropping its
/// last position breaks it (dropping the first does by construction, re-checked here).
pub fn oracle_lmco(s: &[TokenId], query: &[TokenId]) -> OracleResult {
    let q = distinct(query);
    let members = Members(&q);
    let n = s.len();
    let mut lmco_table = vec![0u64; n + 1];
    let mut minimal_list = Vec::new();
    for k in 1..=n {
        let mut seen = vec![false; q.len()];
        let mut missing = q.len();
        let mut start = None;
        for i in (1..=k).rev() {
            if let Some(slot) = members.slot(s[i - 1]) {
                if !seen[slot] {
                    seen[slot] = true;
                    missing -= 1;
                }
            }
            if missing == 0 {
                start = Some(i);
                break;
            }
        }
        let Some(i) = start else { continue };
        lmco_table[k - i + 1] += 1;
        let right_shrink = &s[i - 1..k - 1];
        let left_shrink = &s[i..k];
        if !members.covered_by(right_shrink) && !members.covered_by(left_shrink) {
            minimal_list.push(MinimalCooccurrence::new(i, k));
        }
    }
    let r1 = minimal_list.first().map(|m| m.end);
    OracleResult {
        n,
        co_table: oracle_co(s, query),
        lmco_table,
        minimal_list,
        r1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<TokenId> {
        s.bytes().map(TokenId::from).collect()
    }

    #[test]
    fn worked_example_co() {
        let co = oracle_co(&toks("----BC-ACCB--"), &toks("ABC"));
        assert_eq!(co[3], 0);
        assert_eq!(co[4], 2);
        assert_eq!(co[8], 6);
    }

    #[test]
    fn worked_example_lmco() {
        let r = oracle_lmco(&toks("----BC-ACCB--"), &toks("ABC"));
        let nonzero: Vec<(usize, u64)> = r
            .lmco_table
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| (w, c))
            .collect();
        assert_eq!(nonzero, vec![(4, 2), (5, 2), (6, 2)]);
        assert_eq!(
            r.minimal_list,
            vec![MinimalCooccurrence::new(5, 8), MinimalCooccurrence::new(8, 11)]
        );
        assert_eq!(r.r1, Some(8));
    }

    #[test]
    fn two_letter_string() {
        let r = oracle_lmco(&toks("AB"), &toks("AB"));
        assert_eq!(&r.co_table[1..], &[0, 1]);
        assert_eq!(r.minimal_list, vec![MinimalCooccurrence::new(1, 2)]);
    }

    #[test]
    fn missing_member_gives_zeros() {
        let r = oracle_lmco(&toks("AAAA"), &toks("AB"));
        assert!(r.lmco_table.iter().all(|&c| c == 0));
        assert!(r.co_table.iter().all(|&c| c == 0));
        assert_eq!(r.r1, None);
    }

    #[test]
    fn single_member_query_counts_windows_containing_it() {
        // The library rejects |Q| = 1; the oracle still answers by definition.
        let co = oracle_co(&toks("A-A"), &toks("A"));
        assert_eq!(&co[1..], &[2, 2, 1]);
    }

    #[test]
    fn lmco_prefix_sums_reproduce_co() {
        // Self-check of the oracle pair on a handful of strings.
        for (s, q) in [("----BC-ACCB--", "ABC"), ("ABBACAB", "AB"), ("CABBAGEBAG", "ABG"), ("AB", "AB")] {
            let r = oracle_lmco(&toks(s), &toks(q));
            let r1 = r.r1.unwrap() as i64;
            let mut prefix = 0i64;
            for w in 1..=r.n {
                prefix += r.lmco_table[w] as i64;
                let expect = prefix - (w as i64 - r1).max(0);
                assert_eq!(r.co_table[w] as i64, expect, "{s} w={w}");
            }
        }
    }
}
