//! Combinatorial block designs (Steiner systems) that index repair groups.
//!
//! A Steiner system `S(t, r, n)` is a family of `r`-subsets ("blocks") of the
//! node set `{1, ..., n}` such that every `t`-subset of nodes lies in exactly
//! one block. With `t = r` the only such family is the set of all
//! `r`-combinations, which [`BlockDesign::complete`] generates. Designs with
//! `t < r` exist only sporadically and are loaded from text.
//!
//! Text format: a header line `n r t`, then one line per block with `r`
//! space-separated node labels (1-based).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{binomial, binomial_u64, exact_div};

/// Node label, 1-based.
pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDesign {
    n: u32,
    r: u32,
    t: u32,
    blocks: Vec<Vec<NodeId>>,
}

/// Counting statistics of a verified Steiner system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignStats {
    /// Number of blocks.
    pub blocks: u64,
    /// Blocks containing any fixed node (symbols stored per node).
    pub alpha_sym: u64,
    /// Blocks containing any fixed pair; 0 when `t < 2`.
    pub lambda2: u64,
    /// Blocks containing any fixed triple; 0 when `t < 3`.
    pub lambda3: u64,
}

impl BlockDesign {
    /// The `t = r` Steiner system: every `r`-subset of `[n]`, in lexicographic
    /// order.
    pub fn complete(n: u32, r: u32) -> Result<Self> {
        if r < 1 || r > n {
            return Err(Error::params(format!(
                "complete design needs 1 <= r <= n, got n={n}, r={r}"
            )));
        }
        Ok(BlockDesign {
            n,
            r,
            t: r,
            blocks: combinations(n, r),
        })
    }

    /// Assemble a design from explicit blocks. Each block is sorted; the block
    /// order is kept as given. The Steiner property is not checked.
    pub fn from_blocks(n: u32, r: u32, t: u32, blocks: Vec<Vec<NodeId>>) -> Result<Self> {
        if r < 1 || r > n || t < 1 || t > r {
            return Err(Error::design(format!(
                "need 1 <= t <= r <= n, got n={n}, r={r}, t={t}"
            )));
        }
        let mut out = Vec::with_capacity(blocks.len());
        for (i, mut block) in blocks.into_iter().enumerate() {
            if block.len() != r as usize {
                return Err(Error::design(format!(
                    "block {} has {} elements, expected {r}",
                    i + 1,
                    block.len()
                )));
            }
            if let Some(&x) = block.iter().find(|&&x| x < 1 || x > n) {
                return Err(Error::design(format!(
                    "block {} contains {x}, outside [1, {n}]",
                    i + 1
                )));
            }
            block.sort_unstable();
            if block.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::design(format!(
                    "block {} has a repeated element",
                    i + 1
                )));
            }
            out.push(block);
        }
        if out.is_empty() {
            return Err(Error::design("design has no blocks"));
        }
        Ok(BlockDesign {
            n,
            r,
            t,
            blocks: out,
        })
    }

    /// Parse the text format. Blank lines are ignored.
    pub fn parse(source: &str) -> Result<Self> {
        let mut lines = source
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let header = parse_ints(header, hline + 1)?;
        let [n, r, t] = header[..] else {
            return Err(Error::Parse {
                line: hline + 1,
                msg: format!("header must be `n r t`, got {} fields", header.len()),
            });
        };
        let mut blocks = Vec::new();
        for (idx, line) in lines {
            let block = parse_ints(line, idx + 1)?;
            if block.len() != r as usize {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("block has {} elements, expected {r}", block.len()),
                });
            }
            blocks.push(block);
        }
        Self::from_blocks(n, r, t, blocks)
    }

    /// Render in the text format; `parse(to_text())` reproduces the design.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.r, self.t);
        for block in &self.blocks {
            let mut first = true;
            for x in block {
                if !first {
                    s.push(' ');
                }
                first = false;
                let _ = write!(s, "{x}");
            }
            s.push('\n');
        }
        s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn blocks(&self) -> &[Vec<NodeId>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn contains(&self, block: usize, node: NodeId) -> bool {
        self.blocks[block].binary_search(&node).is_ok()
    }

    /// Indices of the blocks containing `node`, ascending.
    pub fn blocks_of(&self, node: NodeId) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&j| self.contains(j, node))
            .collect()
    }

    /// True iff every `t`-subset of `[n]` lies in exactly one block.
    pub fn verify_steiner(&self) -> bool {
        let t = self.t as usize;
        let mut seen = std::collections::HashMap::new();
        for block in &self.blocks {
            for sub in subsets_of(block, t) {
                let c = seen.entry(sub).or_insert(0u32);
                *c += 1;
                if *c > 1 {
                    return false;
                }
            }
        }
        seen.len() as u64 == binomial_u64(self.n as u64, t as u64)
    }

    /// Counting statistics. The design must be a Steiner system; the ratios are
    /// checked for integrality.
    pub fn stats(&self) -> Result<DesignStats> {
        let (n, r, t) = (self.n as i64, self.r as i64, self.t as i64);
        let ratio = |a: BigInt, b: BigInt, what: &str| -> Result<u64> {
            exact_div(&a, &b)
                .and_then(|q| q.to_u64())
                .ok_or_else(|| Error::design(format!("{what} = {a}/{b} is not an integer")))
        };
        let blocks = ratio(binomial(n, t), binomial(r, t), "N")?;
        if blocks != self.blocks.len() as u64 {
            return Err(Error::design(format!(
                "expected {blocks} blocks for S({t},{r},{n}), found {}",
                self.blocks.len()
            )));
        }
        let alpha_sym = ratio(binomial(n - 1, t - 1), binomial(r - 1, t - 1), "alpha")?;
        let lambda2 = if t >= 2 {
            ratio(binomial(n - 2, t - 2), binomial(r - 2, t - 2), "lambda2")?
        } else {
            0
        };
        let lambda3 = if t >= 3 {
            ratio(binomial(n - 3, t - 3), binomial(r - 3, t - 3), "lambda3")?
        } else {
            0
        };
        Ok(DesignStats {
            blocks,
            alpha_sym,
            lambda2,
            lambda3,
        })
    }

    /// Extended design used by the one-node extension: append `n + 1` to every
    /// block and add the block `{1, ..., n}` last.
    pub(crate) fn extended(&self) -> Result<Self> {
        let n = self.n + 1;
        let mut blocks: Vec<Vec<NodeId>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.push(n);
                b
            })
            .collect();
        blocks.push((1..n).collect());
        Self::from_blocks(n, self.r + 1, self.t + 1, blocks)
    }
}

fn parse_ints(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("`{tok}` is not a non-negative integer"),
            })
        })
        .collect()
}

/// All `r`-subsets of `[n]` in lexicographic order.
pub(crate) fn combinations(n: u32, r: u32) -> Vec<Vec<NodeId>> {
    let items: Vec<NodeId> = (1..=n).collect();
    subsets_of(&items, r as usize)
}

/// All `size`-subsets of a sorted slice, lexicographic.
pub fn subsets_of(items: &[NodeId], size: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(items: &[NodeId], size: usize, cur: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let need = size - cur.len();
        for i in 0..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(&items[i + 1..], size, cur, out);
            cur.pop();
        }
    }
    rec(items, size, &mut cur, &mut out);
    out
}
