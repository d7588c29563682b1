//! Row types of the CSV interchange tables.
//!
//! `delays.csv` has one row per (tree, reached node); the root is not a
//! row. `trees.csv` has one row per tree, including trees that reached
//! nobody. Frames are frame indices, delays are seconds and
//! `elapsed_contact` counts contact frames.

use serde::{Deserialize, Serialize};

pub const DELAYS_NAME: &str = "delays.csv";
pub const TREES_NAME: &str = "trees.csv";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelayRow {
    pub tree_id: u64,
    pub root: String,
    pub t0_frame: u32,
    pub node: String,
    pub parent: String,
    pub level: u32,
    pub arrival_frame: u32,
    pub first_contact_frame: u32,
    pub delay_t0: u64,
    pub delay_root: u64,
    pub delay_first_contact: u64,
    pub elapsed_contact: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRow {
    pub tree_id: u64,
    pub root: String,
    pub t0_frame: u32,
    /// Empty when the tree reached nobody.
    pub t_r_frame: Option<u32>,
    pub size: u64,
    pub depth: u32,
}
