//! The TOML program file.
//!
//! ```toml
//! [objects]
//! X = 2                                          # finite set
//! S = { family = "binary_prefix" }
//! C = { family = "constant", size = 3 }
//! P = { family = "product", factors = ["X", "S"] }
//! Q = { family = "countable_product", factors = ["X"] }
//! E = { sizes = [1, 2], connects = [[0, 0]] }     # explicit levels
//!
//! [kernels]
//! f = { dom = "X", cod = "X", matrix = [["1/2", "1/2"], ["0", "1"]] }
//! g = { dom = "S", cod = "X", levels = [{ dom_level = 0, matrix = [["1", "0"]] }] }
//! c = { cod = "S", coin = "1/2" }
//! p = { cod = "X", point = 1 }
//!
//! [terms]
//! t = "copy[X] ; (f (x) id[X])"
//! ```
//!
//! `dom` defaults to the reserved object `unit`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const UNIT: &str = "unit";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectDecl>,
    #[serde(default)]
    pub kernels: BTreeMap<String, KernelDecl>,
    #[serde(default)]
    pub terms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectDecl {
    Finite(usize),
    Family(FamilyDecl),
    Explicit(ExplicitDecl),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyDecl {
    Constant { size: usize },
    BinaryPrefix,
    Product { factors: Vec<String> },
    CountableProduct { factors: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitDecl {
    pub sizes: Vec<usize>,
    pub connects: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDecl {
    #[serde(default = "unit_name", skip_serializing_if = "is_unit")]
    pub dom: String,
    pub cod: String,
    #[serde(flatten)]
    pub body: KernelBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelBody {
    /// Rows of `"p/q"` entries.
    Matrix(Vec<Vec<String>>),
    Levels(Vec<LevelDecl>),
    /// Probability of element 1 in every coordinate.
    Coin(String),
    /// Level-0 element; the state follows the least thread above it.
    Point(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDecl {
    pub dom_level: usize,
    pub matrix: Vec<Vec<String>>,
}

fn unit_name() -> String {
    UNIT.to_string()
}

fn is_unit(s: &str) -> bool {
    s == UNIT
}

impl Document {
    pub fn parse(src: &str) -> Result<Document> {
        toml::from_str(src).map_err(|e| Error::Syntax {
            pos: e.span().map_or(0, |s| s.start),
            msg: e.message().to_string(),
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }
}
