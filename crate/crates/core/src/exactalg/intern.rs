use std::collections::HashMap;
use std::sync::Mutex;

use super::{sign_canonical, ExactMatrix};

/// Assigns integer ids to matrices up to sign.
///
/// Ids are dense and handed out in first-insertion order. Safe to share
/// between threads; each insert-or-get is atomic.
#[derive(Default)]
pub struct ObservableInterner {
    inner: Mutex<Table>,
}

#[derive(Default)]
struct Table {
    ids: HashMap<ExactMatrix, usize>,
    representatives: Vec<ExactMatrix>,
}

impl ObservableInterner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `(id, flipped)` where `m = (−1)^flipped · representative(id)`.
    pub fn intern(&self, m: &ExactMatrix) -> (usize, bool) {
        let (canonical, flipped) = sign_canonical(m);
        let mut t = self.inner.lock().expect("interner lock poisoned");
        if let Some(&id) = t.ids.get(&canonical) {
            return (id, flipped);
        }
        let id = t.representatives.len();
        t.representatives.push(canonical.clone());
        t.ids.insert(canonical, id);
        (id, flipped)
    }

    /// Looks up without inserting.
    pub fn get(&self, m: &ExactMatrix) -> Option<(usize, bool)> {
        let (canonical, flipped) = sign_canonical(m);
        let t = self.inner.lock().expect("interner lock poisoned");
        t.ids.get(&canonical).map(|&id| (id, flipped))
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("interner lock poisoned").representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn representative(&self, id: usize) -> ExactMatrix {
        self.inner.lock().expect("interner lock poisoned").representatives[id].clone()
    }

    pub fn into_representatives(self) -> Vec<ExactMatrix> {
        self.inner.into_inner().expect("interner lock poisoned").representatives
    }
}
