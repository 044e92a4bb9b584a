//! Process-wide string interning for symbols and vertex names.
//!
//! Interned strings are leaked, so equality and hashing reduce to pointer
//! operations. The set of distinct names in any workload here is small
//! (labels of one alphabet, vertex names of one search), so the leak is bounded.

use std::collections::HashSet;
use std::sync::{OnceLock, RwLock};

fn table() -> &'static RwLock<HashSet<&'static str>> {
    static TABLE: OnceLock<RwLock<HashSet<&'static str>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashSet::new()))
}

pub(crate) fn intern(s: &str) -> &'static str {
    if let Some(found) = table().read().expect("intern table poisoned").get(s) {
        return found;
    }
    let mut guard = table().write().expect("intern table poisoned");
    if let Some(found) = guard.get(s) {
        return found;
    }
    let leaked: &'static str = Box::leak(s.to_owned().into_boxed_str());
    guard.insert(leaked);
    leaked
}
