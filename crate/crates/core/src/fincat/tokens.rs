//! Token encodings for derived categories.

use std::collections::HashMap;

fn wrap(t: &str) -> String {
    if t.contains('|') || t.contains('@') {
        format!("({t})")
    } else {
        t.to_string()
    }
}

/// `a|b`, parenthesising components that themselves contain `|`.
pub fn pair_token(a: &str, b: &str) -> String {
    format!("{}|{}", wrap(a), wrap(b))
}

/// Makes morphism tokens unique: a repeated base token gets `@source`, and
/// `@source>target` if that is still not enough.
pub fn disambiguate(base: Vec<String>, sources: &[String], targets: &[String]) -> Vec<String> {
    let mut count: HashMap<&str, usize> = HashMap::new();
    for t in &base {
        *count.entry(t.as_str()).or_default() += 1;
    }
    let first: Vec<String> = base
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if count[t.as_str()] > 1 {
                format!("{}@{}", wrap(t), wrap(&sources[i]))
            } else {
                t.clone()
            }
        })
        .collect();
    let mut count: HashMap<&str, usize> = HashMap::new();
    for t in &first {
        *count.entry(t.as_str()).or_default() += 1;
    }
    let second: Vec<String> = first
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if count[t.as_str()] > 1 {
                format!("{}>{}", t, wrap(&targets[i]))
            } else {
                t.clone()
            }
        })
        .collect();
    let mut seen: HashMap<String, usize> = HashMap::new();
    second
        .into_iter()
        .map(|t| {
            let n = seen.entry(t.clone()).or_default();
            *n += 1;
            if *n == 1 {
                t
            } else {
                format!("{t}#{n}")
            }
        })
        .collect()
}
