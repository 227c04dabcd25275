use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("function is not total: {0}")]
    NotTotal(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("functions({morphism}) is not an identity")]
    IdentityViolation { morphism: String },
    #[error("functions({gf}) differs from functions({g}) . functions({f})")]
    CompositionViolation { g: String, f: String, gf: String },
    #[error("not natural at {morphism}")]
    NotNatural { morphism: String },
}

/// A finite set of distinct element tokens, in declared order.
#[derive(Clone)]
pub struct FinSet {
    elements: Arc<Vec<String>>,
    index: Arc<HashMap<String, usize>>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.elements, &other.elements) || self.elements == other.elements
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements.iter()).finish()
    }
}

impl FinSet {
    pub fn new<I, S>(elements: I) -> Result<FinSet, SetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(SetError::DuplicateElement(e.clone()));
            }
        }
        Ok(FinSet {
            elements: Arc::new(elements),
            index: Arc::new(index),
        })
    }

    /// `{0, 1, ..., n-1}`
    pub fn range(n: usize) -> FinSet {
        FinSet::new((0..n).map(|i| i.to_string())).unwrap()
    }

    pub fn empty() -> FinSet {
        FinSet::range(0)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// A total function between finite sets, stored as element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunction {
    source: FinSet,
    target: FinSet,
    mapping: Vec<usize>,
}

impl FinFunction {
    pub fn new(source: FinSet, target: FinSet, mapping: Vec<usize>) -> Result<FinFunction, SetError> {
        if mapping.len() != source.len() {
            return Err(SetError::NotTotal(format!(
                "{} images for {} elements",
                mapping.len(),
                source.len()
            )));
        }
        if let Some(&bad) = mapping.iter().find(|&&y| y >= target.len()) {
            return Err(SetError::NotTotal(format!("image index {bad} outside target")));
        }
        Ok(FinFunction { source, target, mapping })
    }

    pub fn from_names(source: FinSet, target: FinSet, pairs: &HashMap<String, String>) -> Result<FinFunction, SetError> {
        let mut mapping = Vec::with_capacity(source.len());
        for e in source.elements() {
            let img = pairs.get(e).ok_or_else(|| SetError::NotTotal(format!("no image for {e}")))?;
            mapping.push(target.position(img).ok_or_else(|| SetError::UnknownElement(img.clone()))?);
        }
        for k in pairs.keys() {
            if source.position(k).is_none() {
                return Err(SetError::UnknownElement(k.clone()));
            }
        }
        FinFunction::new(source, target, mapping)
    }

    pub fn identity(s: &FinSet) -> FinFunction {
        FinFunction {
            source: s.clone(),
            target: s.clone(),
            mapping: (0..s.len()).collect(),
        }
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply(&self, x: usize) -> usize {
        self.mapping[x]
    }

    /// `self . f`
    pub fn after(&self, f: &FinFunction) -> Result<FinFunction, SetError> {
        if f.target != self.source {
            return Err(SetError::ShapeMismatch("functions are not composable".into()));
        }
        Ok(FinFunction {
            source: f.source.clone(),
            target: self.target.clone(),
            mapping: f.mapping.iter().map(|&x| self.mapping[x]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.mapping.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// First pair of distinct elements with equal image.
    pub fn collision(&self) -> Option<(usize, usize)> {
        let mut seen = vec![usize::MAX; self.target.len()];
        for (x, &y) in self.mapping.iter().enumerate() {
            if seen[y] != usize::MAX {
                return Some((seen[y], x));
            }
            seen[y] = x;
        }
        None
    }

    /// First target element outside the image.
    pub fn unhit(&self) -> Option<usize> {
        let mut hit = vec![false; self.target.len()];
        for &y in &self.mapping {
            hit[y] = true;
        }
        hit.iter().position(|h| !h)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && self.collision().is_none()
    }

    /// Name-level table, in source order.
    pub fn table(&self) -> Vec<(String, String)> {
        self.mapping
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.source.name(x).to_string(), self.target.name(y).to_string()))
            .collect()
    }
}
