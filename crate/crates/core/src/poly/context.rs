use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered variable names, optionally split into a base block `z` and a
/// cotangent block `w` of the same length.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VariableContext {
    names: Vec<String>,
    cotangent_split: Option<usize>,
}

impl VariableContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        Self::check_names(&names)?;
        Ok(Arc::new(VariableContext { names, cotangent_split: None }))
    }

    /// Context `z_0..z_n, w_0..w_n` over the given base context.
    pub fn cotangent(base: &VariableContext) -> Result<Arc<Self>> {
        if base.cotangent_split.is_some() {
            return Err(Error::InvalidContext("base context is already a cotangent context".into()));
        }
        let n = base.names.len();
        let mut names = base.names.clone();
        for i in 0..n {
            let mut w = format!("w{i}");
            while names.contains(&w) {
                w.insert(0, '_');
            }
            names.push(w);
        }
        Self::check_names(&names)?;
        Ok(Arc::new(VariableContext { names, cotangent_split: Some(n) }))
    }

    /// Cotangent context with explicit cotangent names.
    pub fn cotangent_with_names<S: AsRef<str>>(base: &[S], cotangent: &[S]) -> Result<Arc<Self>> {
        if base.len() != cotangent.len() {
            return Err(Error::InvalidContext("base and cotangent blocks differ in length".into()));
        }
        let mut names: Vec<String> = base.iter().map(|s| s.as_ref().to_string()).collect();
        names.extend(cotangent.iter().map(|s| s.as_ref().to_string()));
        Self::check_names(&names)?;
        Ok(Arc::new(VariableContext { names, cotangent_split: Some(base.len()) }))
    }

    fn check_names(names: &[String]) -> Result<()> {
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::InvalidContext("empty variable name".into()));
            }
            if names[..i].contains(a) {
                return Err(Error::InvalidContext(format!("duplicate variable name {a}")));
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn cotangent_split(&self) -> Option<usize> {
        self.cotangent_split
    }

    pub fn is_cotangent(&self) -> bool {
        self.cotangent_split.is_some()
    }

    /// Number of base variables (the whole context if not cotangent).
    pub fn base_len(&self) -> usize {
        self.cotangent_split.unwrap_or(self.names.len())
    }

    /// Index of `w_i` in a cotangent context.
    pub fn w(&self, i: usize) -> usize {
        self.cotangent_split.expect("cotangent context") + i
    }

    /// The base block as a standalone context.
    pub fn base(&self) -> Arc<VariableContext> {
        Arc::new(VariableContext {
            names: self.names[..self.base_len()].to_vec(),
            cotangent_split: None,
        })
    }

    /// A context with `extra` prepended; used for tag variables.
    pub(crate) fn with_front(&self, extra: &[&str]) -> Arc<VariableContext> {
        let mut names: Vec<String> = Vec::with_capacity(extra.len() + self.names.len());
        for e in extra {
            let mut e = e.to_string();
            while self.names.contains(&e) || names.contains(&e) {
                e.push('\'');
            }
            names.push(e);
        }
        names.extend(self.names.iter().cloned());
        Arc::new(VariableContext { names, cotangent_split: None })
    }

    /// A plain context with the variables in `perm` order.
    pub(crate) fn permuted(&self, perm: &[usize]) -> Arc<VariableContext> {
        Arc::new(VariableContext {
            names: perm.iter().map(|&i| self.names[i].clone()).collect(),
            cotangent_split: None,
        })
    }

    /// A plain context keeping only the listed variables.
    pub(crate) fn restricted(&self, keep: &[usize]) -> Arc<VariableContext> {
        self.permuted(keep)
    }
}

impl fmt::Display for VariableContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}
