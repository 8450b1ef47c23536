//! Variable tables for bigraded polynomial rings.
//!
//! A table has two ordered blocks: the deformation block (written mu or
//! lambda in the inputs this library is pointed at) and the coordinate
//! block. Bidegrees are counted per block.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Index of a variable inside a table: mu-block variables come first,
/// then the x-block.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Block {
    Mu,
    X,
}

/// Ordered list of variable names split into the two blocks. Tables are
/// immutable once built and shared behind `Arc`.
#[derive(Debug)]
pub struct VarTable {
    mu: Vec<String>,
    x: Vec<String>,
    index: HashMap<String, Var>,
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.mu == other.mu && self.x == other.x
    }
}
impl Eq for VarTable {}

impl VarTable {
    pub fn new<S: AsRef<str>>(mu: &[S], x: &[S]) -> Arc<VarTable> {
        let mu: Vec<String> = mu.iter().map(|s| s.as_ref().to_string()).collect();
        let x: Vec<String> = x.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, name) in mu.iter().chain(x.iter()).enumerate() {
            assert!(is_ident(name), "bad variable name {name:?}");
            let prev = index.insert(name.clone(), Var(i as u32));
            assert!(prev.is_none(), "duplicate variable name {name:?}");
        }
        Arc::new(VarTable { mu, x, index })
    }

    pub fn mu_len(&self) -> usize {
        self.mu.len()
    }
    pub fn x_len(&self) -> usize {
        self.x.len()
    }
    pub fn len(&self) -> usize {
        self.mu.len() + self.x.len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        let i = v.0 as usize;
        if i < self.mu.len() {
            &self.mu[i]
        } else {
            &self.x[i - self.mu.len()]
        }
    }

    pub fn block(&self, v: Var) -> Block {
        if (v.0 as usize) < self.mu.len() {
            Block::Mu
        } else {
            Block::X
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.len() as u32).map(Var)
    }

    pub fn mu_vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.mu.len() as u32).map(Var)
    }

    pub fn x_vars(&self) -> impl Iterator<Item = Var> + '_ {
        (self.mu.len() as u32..self.len() as u32).map(Var)
    }

    pub fn mu_names(&self) -> &[String] {
        &self.mu
    }
    pub fn x_names(&self) -> &[String] {
        &self.x
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu[{}] x[{}]", self.mu.join(","), self.x.join(","))
    }
}

/// Tables compare by content; two Arcs to equal tables are interchangeable.
pub fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A bidegree (mu-degree, x-degree).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Bidegree {
    pub mu: u32,
    pub x: u32,
}

impl Bidegree {
    pub fn new(mu: u32, x: u32) -> Bidegree {
        Bidegree { mu, x }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.mu, self.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_blocks() {
        let t = VarTable::new(&["mu0", "mu1"], &["x0", "x1", "x2"]);
        assert_eq!(t.mu_len(), 2);
        assert_eq!(t.x_len(), 3);
        let v = t.var("x1").unwrap();
        assert_eq!(t.name(v), "x1");
        assert_eq!(t.block(v), Block::X);
        assert_eq!(t.block(t.var("mu1").unwrap()), Block::Mu);
        assert!(t.var("y").is_none());
    }

    #[test]
    #[should_panic]
    fn duplicate_names_rejected() {
        VarTable::new(&["a"], &["a"]);
    }

    #[test]
    fn equality_by_content() {
        let a = VarTable::new(&["m"], &["x", "y"]);
        let b = VarTable::new(&["m"], &["x", "y"]);
        let c = VarTable::new(&["m"], &["y", "x"]);
        assert!(same_table(&a, &b));
        assert!(!same_table(&a, &c));
    }
}
