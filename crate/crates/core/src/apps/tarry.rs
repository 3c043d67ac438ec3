//! Tarry's problem: columns with equal power sums up to degree `k`.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::binomial;
use crate::arith::saturating_u128;
use crate::error::{Error, Result};

/// `h` columns of `s` integers each, read as the `s x h` matrix `x_{i,u}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TarryWitness {
    pub k: u32,
    pub columns: Vec<Vec<i64>>,
}

impl TarryWitness {
    pub fn s(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn h(&self) -> usize {
        self.columns.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TarryVerdict {
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

fn power_sum(col: &[i64], j: u32) -> BigInt {
    col.iter().map(|&x| BigInt::from(x).pow(j)).sum()
}

/// Equal power sums for `j = 1..=k` across all columns and pairwise distinct
/// sums of `(k+1)`-st powers.
pub fn verify_tarry(w: &TarryWitness) -> TarryVerdict {
    let fail = |msg: String| TarryVerdict {
        valid: false,
        failure: Some(msg),
    };
    let s = w.s();
    if w.columns.len() < 2 || s == 0 || w.columns.iter().any(|c| c.len() != s) {
        return fail("need at least two nonempty columns of equal length".into());
    }
    for j in 1..=w.k {
        let first = power_sum(&w.columns[0], j);
        for (u, c) in w.columns.iter().enumerate().skip(1) {
            let v = power_sum(c, j);
            if v != first {
                return fail(format!("power sums of degree {j} differ: column 0 has {first}, column {u} has {v}"));
            }
        }
    }
    let top: Vec<BigInt> = w.columns.iter().map(|c| power_sum(c, w.k + 1)).collect();
    for u in 0..top.len() {
        for v in u + 1..top.len() {
            if top[u] == top[v] {
                return fail(format!("columns {u} and {v} share the degree {} power sum {}", w.k + 1, top[u]));
            }
        }
    }
    TarryVerdict {
        valid: true,
        failure: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TarrySearch {
    pub k: u32,
    pub h: usize,
    pub s: usize,
    pub bound: i64,
    pub witness: Option<TarryWitness>,
    /// Columns examined; without a witness, every multiset of `s` entries in
    /// `[1, bound]` was examined.
    pub columns_examined: u128,
}

/// Next nondecreasing tuple over `[1, bound]` in lexicographic order.
fn advance(col: &mut [i64], bound: i64) -> bool {
    let s = col.len();
    for i in (0..s).rev() {
        if col[i] < bound {
            col[i] += 1;
            let v = col[i];
            col[i + 1..].iter_mut().for_each(|x| *x = v);
            return true;
        }
    }
    false
}

/// Searches multisets of `s` entries from `[1, bound]`, grouped by their
/// power sums of degrees `1..=k`, for `h` columns with distinct sums of
/// `(k+1)`-st powers. Returns the witness whose last column is
/// lexicographically smallest.
pub fn search_tarry(k: u32, h: usize, s: usize, bound: i64, cap: u128) -> Result<TarrySearch> {
    if bound < 1 || s == 0 || h < 2 || k == 0 {
        return Err(Error::input("need k >= 1, h >= 2, s >= 1 and bound >= 1"));
    }
    let total = saturating_u128(&binomial(bound as u64 + s as u64 - 1, s as u64));
    if total > cap {
        return Err(Error::Resource {
            what: "Tarry columns",
            needed: total,
            cap,
        });
    }
    // key -> top power sum -> first column seen
    let mut groups: HashMap<Vec<BigInt>, Vec<(BigInt, Vec<i64>)>> = HashMap::new();
    let mut col = vec![1i64; s];
    let mut examined = 0u128;
    loop {
        examined += 1;
        let key: Vec<BigInt> = (1..=k).map(|j| power_sum(&col, j)).collect();
        let top = power_sum(&col, k + 1);
        let g = groups.entry(key).or_default();
        if !g.iter().any(|(t, _)| *t == top) {
            g.push((top, col.clone()));
            if g.len() == h {
                let columns = g.iter().map(|(_, c)| c.clone()).collect();
                return Ok(TarrySearch {
                    k,
                    h,
                    s,
                    bound,
                    witness: Some(TarryWitness { k, columns }),
                    columns_examined: examined,
                });
            }
        }
        if !advance(&mut col, bound) {
            break;
        }
    }
    Ok(TarrySearch {
        k,
        h,
        s,
        bound,
        witness: None,
        columns_examined: examined,
    })
}
