//! Minimal blocks of a unitary: the finest pairs `<I, J>` of input and output
//! index sets such that `U` never couples `I` to anything outside `J`.
//!
//! They are the connected components of the bipartite support graph with an
//! edge `i -> j` whenever `|U_ji| > zero_tol`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{check_dims, UnitaryMatrix};

pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPartition {
    /// Sorted by smallest input index.
    pub blocks: Vec<Block>,
    pub zero_tol: f64,
    #[serde(skip)]
    input_block: Vec<usize>,
    #[serde(skip)]
    output_block: Vec<usize>,
}

impl BlockPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.input_block.len()
    }

    pub fn block_of_input(&self, i: usize) -> usize {
        self.input_block[i]
    }

    pub fn block_of_output(&self, j: usize) -> usize {
        self.output_block[j]
    }

    /// Whether the transition `input -> output` stays inside one block.
    pub fn connects(&self, input: usize, output: usize) -> bool {
        self.input_block[input] == self.output_block[output]
    }

    pub fn input_groups(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.inputs.clone()).collect()
    }

    pub fn same_structure(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |v: &[usize]| {
            v.iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        for b in &self.blocks {
            writeln!(f, "I={{{}}} J={{{}}}", set(&b.inputs), set(&b.outputs))?;
        }
        Ok(())
    }
}

pub fn minimal_blocks(u: &UnitaryMatrix, zero_tol: f64) -> Result<BlockPartition> {
    let n = u.dim();
    let m = u.matrix();
    let mut input_block = vec![usize::MAX; n];
    let mut output_block = vec![usize::MAX; n];
    let mut blocks = Vec::new();

    // Nodes 0..n are inputs, n..2n outputs. Scanning inputs in order makes
    // blocks come out sorted by least input index.
    for start in 0..n {
        if input_block[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut queue = VecDeque::from([start]);
        input_block[start] = id;
        while let Some(node) = queue.pop_front() {
            if node < n {
                inputs.push(node);
                for (j, slot) in output_block.iter_mut().enumerate() {
                    if *slot == usize::MAX && m.transition(node, j).norm() > zero_tol {
                        *slot = id;
                        queue.push_back(n + j);
                    }
                }
            } else {
                let j = node - n;
                outputs.push(j);
                for (i, slot) in input_block.iter_mut().enumerate() {
                    if *slot == usize::MAX && m.transition(i, j).norm() > zero_tol {
                        *slot = id;
                        queue.push_back(i);
                    }
                }
            }
        }
        inputs.sort_unstable();
        outputs.sort_unstable();
        if inputs.len() != outputs.len() {
            return Err(Error::UnbalancedBlock { inputs, outputs });
        }
        blocks.push(Block { inputs, outputs });
    }
    // A column with no entry above tolerance would leave outputs unassigned;
    // for a unitary that cannot happen without an unbalanced block above.
    if let Some(j) = output_block.iter().position(|&b| b == usize::MAX) {
        return Err(Error::UnbalancedBlock {
            inputs: vec![],
            outputs: vec![j],
        });
    }
    Ok(BlockPartition {
        blocks,
        zero_tol,
        input_block,
        output_block,
    })
}

pub fn same_blocks(u1: &UnitaryMatrix, u2: &UnitaryMatrix, zero_tol: f64) -> Result<bool> {
    check_dims(u1.dim(), u2.dim())?;
    Ok(minimal_blocks(u1, zero_tol)?.same_structure(&minimal_blocks(u2, zero_tol)?))
}
