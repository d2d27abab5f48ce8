//! Block designs and their information matrices.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, int, rat, RatMatrix};

/// `v` treatments (`0..v`) arranged in blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDesign {
    treatments: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockDesign {
    pub fn new(treatments: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if treatments == 0 || blocks.is_empty() {
            return Err(Error::InvalidDesign("empty design".into()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::InvalidDesign(format!("block {i} is empty")));
            }
            if let Some(t) = b.iter().find(|&&t| t >= treatments) {
                return Err(Error::InvalidDesign(format!("block {i} has treatment {t} >= {treatments}")));
            }
        }
        Ok(Self { treatments, blocks })
    }

    /// Same as [`BlockDesign::new`] with treatments numbered from 1.
    pub fn from_one_based(treatments: usize, blocks: &[&[usize]]) -> Result<Self> {
        if blocks.iter().flat_map(|b| b.iter()).any(|&t| t == 0) {
            return Err(Error::InvalidDesign("treatment 0 in a one-based design".into()));
        }
        Self::new(
            treatments,
            blocks.iter().map(|b| b.iter().map(|t| t - 1).collect()).collect(),
        )
    }

    pub fn treatments(&self) -> usize {
        self.treatments
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Common block size `k`, if all blocks agree.
    pub fn block_size(&self) -> Option<usize> {
        let k = self.blocks[0].len();
        self.blocks.iter().all(|b| b.len() == k).then_some(k)
    }

    pub fn replication(&self) -> Vec<usize> {
        let mut r = vec![0; self.treatments];
        for &t in self.blocks.iter().flatten() {
            r[t] += 1;
        }
        r
    }

    /// `v x b` treatment-block incidence `N`.
    pub fn incidence(&self) -> RatMatrix {
        let mut n = RatMatrix::zeros(self.treatments, self.blocks.len());
        for (j, b) in self.blocks.iter().enumerate() {
            for &t in b {
                n[(t, j)] += int(1);
            }
        }
        n
    }

    /// `C_d = R - N K^{-1} N^T`, `K` the diagonal of block sizes.
    pub fn c_matrix(&self) -> RatMatrix {
        let r = RatMatrix::diag(&self.replication().iter().map(|&v| int(v as i64)).collect::<Vec<_>>());
        let k_inv = RatMatrix::diag(&self.block_sizes().iter().map(|&k| rat(1, k as i64)).collect::<Vec<_>>());
        let n = self.incidence();
        &r - &(&(&n * &k_inv) * &n.transpose())
    }

    /// No treatment repeated within a block.
    pub fn is_binary(&self) -> bool {
        self.blocks.iter().all(|b| {
            let mut seen = vec![false; self.treatments];
            b.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
        })
    }

    /// Connectivity of the treatment-block graph.
    pub fn is_connected_by_traversal(&self) -> bool {
        let v = self.treatments;
        let mut seen_t = vec![false; v];
        let mut seen_b = vec![false; self.blocks.len()];
        let mut queue = VecDeque::from([0usize]);
        seen_t[0] = true;
        while let Some(t) = queue.pop_front() {
            for (j, b) in self.blocks.iter().enumerate() {
                if seen_b[j] || !b.contains(&t) {
                    continue;
                }
                seen_b[j] = true;
                for &u in b {
                    if !std::mem::replace(&mut seen_t[u], true) {
                        queue.push_back(u);
                    }
                }
            }
        }
        seen_t.iter().all(|&s| s)
    }

    /// `rank(C_d) = v - 1`.
    pub fn is_connected_by_rank(&self) -> bool {
        linalg::rank(&self.c_matrix()) + 1 == self.treatments
    }

    /// Both connectivity criteria; they always agree.
    pub fn is_connected(&self) -> bool {
        let graph = self.is_connected_by_traversal();
        assert_eq!(graph, self.is_connected_by_rank(), "connectivity criteria disagree");
        graph
    }
}

/// Blocks as one-based treatment lists, e.g. `{1 2 3 4} {3 4 5 6}`.
impl fmt::Display for BlockDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let ts: Vec<String> = b.iter().map(|t| (t + 1).to_string()).collect();
                format!("{{{}}}", ts.join(" "))
            })
            .collect();
        write!(f, "v={} b={}: {}", self.treatments, self.blocks.len(), parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_matrix_of_design_a() {
        let d = BlockDesign::from_one_based(6, &[&[1, 2, 3, 4], &[1, 2, 5, 6], &[3, 4, 5, 6]]).unwrap();
        let c = d.c_matrix();
        // r = 2 everywhere; λ_ij counted from the blocks.
        let together = |i: usize, j: usize| d.blocks().iter().filter(|b| b.contains(&i) && b.contains(&j)).count();
        for i in 0..6 {
            assert_eq!(c[(i, i)], rat(3, 2));
            for j in 0..6 {
                if i == j {
                    continue;
                }
                let paired = [(0, 1), (2, 3), (4, 5)].contains(&(i.min(j), i.max(j)));
                let expected = if paired { rat(-1, 2) } else { rat(-1, 4) };
                assert_eq!(c[(i, j)], expected);
                assert_eq!(c[(i, j)], rat(-(together(i, j) as i64), 4));
            }
        }
        assert!(c.row_sums().iter().all(|s| *s == int(0)));
        assert!(d.is_connected());
        assert!(d.is_binary());
    }

    #[test]
    fn disjoint_blocks_disconnect() {
        let d = BlockDesign::from_one_based(6, &[&[1, 2, 3], &[4, 5, 6]]).unwrap();
        assert!(!d.is_connected_by_traversal());
        assert!(!d.is_connected());
    }

    #[test]
    fn binary_detection() {
        let d = BlockDesign::new(3, vec![vec![0, 0, 1], vec![1, 2]]).unwrap();
        assert!(!d.is_binary());
        assert_eq!(d.block_size(), None);
        assert!(d.is_connected());
    }

    #[test]
    fn empty_rejected() {
        assert!(BlockDesign::new(3, vec![]).is_err());
        assert!(BlockDesign::new(3, vec![vec![]]).is_err());
        assert!(BlockDesign::new(3, vec![vec![3]]).is_err());
    }

    #[test]
    fn display_is_one_based() {
        let d = BlockDesign::from_one_based(4, &[&[1, 2, 3], &[2, 3, 4]]).unwrap();
        assert_eq!(d.to_string(), "v=4 b=2: {1 2 3} {2 3 4}");
    }
}
