//! Knuth-Bendix completion of string rewriting systems.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::assign::push_word;
use super::{GeneratorAssignment, IncidenceStructure, Word};

/// Shorter words first, then lexicographic by generator index.
pub fn shortlex_cmp(a: &[u16], b: &[u16]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Recursive path order on strings: compares last letters first; a word
/// whose last letter is larger dominates everything built from smaller
/// letters. `letter` ranks generators.
pub fn recursive_cmp(a: &[u16], b: &[u16], letter: impl Fn(u16, u16) -> Ordering) -> Ordering {
    let (mut i, mut j) = (a.len(), b.len());
    loop {
        match (i, j) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {}
        }
        match letter(a[i - 1], b[j - 1]) {
            Ordering::Equal => {
                i -= 1;
                j -= 1;
            }
            // a < b iff a[..i] ≤ b[..j-1]
            Ordering::Greater => {
                if j == 1 {
                    return Ordering::Greater;
                }
                j -= 1;
                if a[..i] == b[..j] {
                    return Ordering::Less;
                }
            }
            Ordering::Less => {
                if i == 1 {
                    return Ordering::Less;
                }
                i -= 1;
                if a[..i] == b[..j] {
                    return Ordering::Greater;
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordOrder {
    #[default]
    Shortlex,
    /// Recursive path order with higher generator indices ranked higher.
    Recursive,
    /// Recursive path order with lower generator indices ranked higher.
    RecursiveDescending,
}

impl WordOrder {
    pub fn cmp(self, a: &[u16], b: &[u16]) -> Ordering {
        match self {
            Self::Shortlex => shortlex_cmp(a, b),
            Self::Recursive => recursive_cmp(a, b, |x, y| x.cmp(&y)),
            Self::RecursiveDescending => recursive_cmp(a, b, |x, y| y.cmp(&x)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewriteStatus {
    /// All critical pairs are joinable: normal forms are unique.
    Complete,
    /// A limit stopped completion. Rules remain valid equalities but normal
    /// forms need not be unique.
    Capped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionLimits {
    pub max_rules: usize,
    pub max_length: usize,
    pub order: WordOrder,
}

impl Default for CompletionLimits {
    fn default() -> Self {
        Self { max_rules: 50_000, max_length: 64, order: WordOrder::Shortlex }
    }
}

#[derive(Clone, Debug)]
struct Rule {
    lhs: Word,
    rhs: Word,
    alive: bool,
    processed: bool,
}

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node {
    children: Vec<(u16, u32)>,
    rule: u32,
}

/// Prefix tree over words; each node holds at most one rule id.
#[derive(Clone, Debug)]
struct Trie {
    nodes: Vec<Node>,
}

impl Trie {
    fn new() -> Self {
        Self { nodes: vec![Node { children: Vec::new(), rule: NONE }] }
    }

    fn child(&self, node: u32, c: u16) -> Option<u32> {
        self.nodes[node as usize].children.iter().find(|e| e.0 == c).map(|e| e.1)
    }

    fn set(&mut self, word: impl Iterator<Item = u16>, rule: u32) {
        let mut node = 0u32;
        for c in word {
            node = match self.child(node, c) {
                Some(n) => n,
                None => {
                    let n = self.nodes.len() as u32;
                    self.nodes.push(Node { children: Vec::new(), rule: NONE });
                    self.nodes[node as usize].children.push((c, n));
                    n
                }
            };
        }
        self.nodes[node as usize].rule = rule;
    }

    fn walk(&self, word: impl Iterator<Item = u16>) -> Option<u32> {
        let mut node = 0u32;
        for c in word {
            node = self.child(node, c)?;
        }
        Some(node)
    }

    /// Rule ids stored strictly below `node`.
    fn below(&self, node: u32, out: &mut Vec<u32>) {
        let mut stack: Vec<u32> = self.nodes[node as usize].children.iter().map(|e| e.1).collect();
        while let Some(n) = stack.pop() {
            let nd = &self.nodes[n as usize];
            if nd.rule != NONE {
                out.push(nd.rule);
            }
            stack.extend(nd.children.iter().map(|e| e.1));
        }
    }
}

/// Oriented rules `lhs → rhs` with `lhs` greater than `rhs` in the chosen
/// order.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    generators: usize,
    rules: Vec<Rule>,
    /// Left sides, read forwards.
    prefixes: Trie,
    /// Left sides, read backwards; drives reduction.
    suffixes: Trie,
    alive: usize,
    status: RewriteStatus,
}

struct Completion<'a> {
    sys: RewriteSystem,
    limits: &'a CompletionLimits,
    todo: BinaryHeap<Reverse<(usize, u32)>>,
}

impl Completion<'_> {
    /// Adds `a = b` as a rule unless both sides have the same normal form.
    /// Returns false once the rule cap is exceeded.
    fn equate(&mut self, a: &[u16], b: &[u16]) -> bool {
        let a = self.sys.reduce(a);
        let b = self.sys.reduce(b);
        let (lhs, rhs) = match self.limits.order.cmp(&a, &b) {
            Ordering::Equal => return true,
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
        };
        if lhs.len().max(rhs.len()) > self.limits.max_length {
            self.sys.status = RewriteStatus::Capped;
            return true;
        }
        let id = self.sys.rules.len() as u32;
        self.sys.prefixes.set(lhs.iter().copied(), id);
        self.sys.suffixes.set(lhs.iter().rev().copied(), id);
        self.todo.push(Reverse((lhs.len(), id)));
        self.sys.rules.push(Rule { lhs, rhs, alive: true, processed: false });
        self.sys.alive += 1;
        if self.sys.alive > self.limits.max_rules {
            self.sys.status = RewriteStatus::Capped;
            return false;
        }
        true
    }

    fn kill(&mut self, id: u32) -> (Word, Word) {
        let r = &mut self.sys.rules[id as usize];
        r.alive = false;
        let (lhs, rhs) = (r.lhs.clone(), r.rhs.clone());
        self.sys.prefixes.set(lhs.iter().copied(), NONE);
        self.sys.suffixes.set(lhs.iter().rev().copied(), NONE);
        self.sys.alive -= 1;
        (lhs, rhs)
    }

    /// Whether some other rule's left side occurs inside rule `id`'s.
    fn redundant(&self, id: u32) -> bool {
        let l = &self.sys.rules[id as usize].lhs;
        for end in 1..=l.len() {
            let mut node = 0u32;
            for k in (0..end).rev() {
                match self.sys.suffixes.child(node, l[k]) {
                    Some(n) => node = n,
                    None => break,
                }
                let r = self.sys.suffixes.nodes[node as usize].rule;
                if r != NONE && r != id {
                    return true;
                }
            }
        }
        false
    }

    /// Resolves all overlaps between rule `i` and processed rules.
    fn process(&mut self, i: u32) -> bool {
        if self.redundant(i) {
            let (l, r) = self.kill(i);
            return self.equate(&l, &r);
        }
        self.sys.rules[i as usize].processed = true;
        let li = self.sys.rules[i as usize].lhs.clone();
        let n = li.len();
        let mut partners = Vec::new();
        for k in 1..n {
            // suffix of l_i = prefix of l_j
            partners.clear();
            if let Some(node) = self.sys.prefixes.walk(li[n - k..].iter().copied()) {
                self.sys.prefixes.below(node, &mut partners);
            }
            for &j in &partners {
                let (ri, rj) = match (&self.sys.rules[i as usize], &self.sys.rules[j as usize]) {
                    (a, b) if a.alive && b.alive && b.processed => (a.rhs.clone(), b),
                    _ => continue,
                };
                let x = [&ri[..], &rj.lhs[k..]].concat();
                let y = [&li[..n - k], &rj.rhs[..]].concat();
                if !self.equate(&x, &y) {
                    return false;
                }
            }
            // suffix of l_j = prefix of l_i
            partners.clear();
            if let Some(node) = self.sys.suffixes.walk(li[..k].iter().rev().copied()) {
                self.sys.suffixes.below(node, &mut partners);
            }
            for &j in &partners {
                if j == i {
                    continue;
                }
                let (ri, rj) = match (&self.sys.rules[i as usize], &self.sys.rules[j as usize]) {
                    (a, b) if a.alive && b.alive && b.processed => (a.rhs.clone(), b),
                    _ => continue,
                };
                let x = [&rj.rhs[..], &li[k..]].concat();
                let y = [&rj.lhs[..rj.lhs.len() - k], &ri[..]].concat();
                if !self.equate(&x, &y) {
                    return false;
                }
            }
            if !self.sys.rules[i as usize].alive {
                break;
            }
        }
        true
    }

    /// Removes rules made redundant by later ones and normalizes right
    /// sides; returns false if nothing was removed.
    fn interreduce(&mut self) -> bool {
        let mut removed = Vec::new();
        for id in 0..self.sys.rules.len() as u32 {
            if self.sys.rules[id as usize].alive && self.redundant(id) {
                removed.push(self.kill(id));
            }
        }
        for id in 0..self.sys.rules.len() {
            if self.sys.rules[id].alive {
                let rhs = self.sys.reduce(&self.sys.rules[id].rhs);
                self.sys.rules[id].rhs = rhs;
            }
        }
        let any = !removed.is_empty();
        for (l, r) in removed {
            if !self.equate(&l, &r) {
                break;
            }
        }
        any
    }
}

impl RewriteSystem {
    /// Runs completion on `relations` (pairs of equal words), resolving
    /// overlaps of the shortest unprocessed rule first.
    pub fn complete(generators: usize, relations: &[(Word, Word)], limits: &CompletionLimits) -> Self {
        let sys = Self {
            generators,
            rules: Vec::new(),
            prefixes: Trie::new(),
            suffixes: Trie::new(),
            alive: 0,
            status: RewriteStatus::Complete,
        };
        let mut c = Completion { sys, limits, todo: BinaryHeap::new() };
        let mut ok = relations.iter().all(|(a, b)| c.equate(a, b));
        while ok {
            match c.todo.pop() {
                Some(Reverse((_, i))) => {
                    if c.sys.rules[i as usize].alive {
                        ok = c.process(i);
                    }
                }
                None => {
                    if !c.interreduce() {
                        break;
                    }
                }
            }
        }
        c.sys.rules.retain(|r| r.alive);
        let mut sys = c.sys;
        sys.prefixes = Trie::new();
        sys.suffixes = Trie::new();
        for (id, r) in sys.rules.iter().enumerate() {
            sys.prefixes.set(r.lhs.iter().copied(), id as u32);
            sys.suffixes.set(r.lhs.iter().rev().copied(), id as u32);
        }
        sys
    }

    /// Normal form of `w`, rewriting at the leftmost completed match.
    pub fn reduce(&self, w: &[u16]) -> Word {
        let mut out: Word = Vec::with_capacity(w.len());
        let mut input: Word = w.iter().rev().copied().collect();
        'next: while let Some(c) = input.pop() {
            out.push(c);
            let mut node = 0u32;
            for k in (0..out.len()).rev() {
                match self.suffixes.child(node, out[k]) {
                    Some(n) => node = n,
                    None => continue 'next,
                }
                let r = self.suffixes.nodes[node as usize].rule;
                if r != NONE {
                    out.truncate(k);
                    input.extend(self.rules[r as usize].rhs.iter().rev());
                    continue 'next;
                }
            }
        }
        out
    }

    pub fn status(&self) -> RewriteStatus {
        self.status
    }

    /// Re-checks every critical pair from scratch, including left sides
    /// nested inside others; true when all of them are joinable.
    pub fn verify_local_confluence(&self) -> bool {
        for a in &self.rules {
            for b in &self.rules {
                let (la, lb) = (&a.lhs, &b.lhs);
                // suffix of la overlaps prefix of lb
                for k in 1..la.len().min(lb.len()) {
                    if la[la.len() - k..] == lb[..k] {
                        let x = [&a.rhs[..], &lb[k..]].concat();
                        let y = [&la[..la.len() - k], &b.rhs[..]].concat();
                        if self.reduce(&x) != self.reduce(&y) {
                            return false;
                        }
                    }
                }
                // lb inside la
                if lb.len() <= la.len() && !std::ptr::eq(a, b) {
                    for s in 0..=la.len() - lb.len() {
                        if la[s..s + lb.len()] == lb[..] {
                            let y = [&la[..s], &b.rhs[..], &la[s + lb.len()..]].concat();
                            if self.reduce(&a.rhs) != self.reduce(&y) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Whether `a` and `b` reduce to the same word.
    pub fn joins(&self, a: &[u16], b: &[u16]) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    pub fn is_complete(&self) -> bool {
        self.status == RewriteStatus::Complete
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn rule_count(&self) -> usize {
        self.alive
    }

    /// Live rules in creation order.
    pub fn rules(&self) -> Vec<(&[u16], &[u16])> {
        self.rules.iter().map(|r| (r.lhs.as_slice(), r.rhs.as_slice())).collect()
    }
}

fn concat(parts: &[&[u16]]) -> Word {
    parts.concat()
}

/// The product over blocks, in block order, of the words of their points.
pub fn product_word(ga: &GeneratorAssignment, inc: &IncidenceStructure) -> Word {
    let mut w = Word::new();
    for b in inc.blocks() {
        for &p in b {
            push_word(&mut w, ga.word(p));
        }
    }
    w
}

/// Completes the presentation with involutive generators, `A_p² = 1` for
/// every point, `A_u A_v = A_v A_u` for points sharing a block, and the same
/// commutation for every pair in `extra_commuting`.
pub fn knuth_bendix(
    ga: &GeneratorAssignment,
    inc: &IncidenceStructure,
    extra_commuting: &[(usize, usize)],
    limits: &CompletionLimits,
) -> RewriteSystem {
    RewriteSystem::complete(ga.generator_count(), &relations(ga, inc, extra_commuting), limits)
}

/// The defining relations as word pairs.
pub fn relations(
    ga: &GeneratorAssignment,
    inc: &IncidenceStructure,
    extra_commuting: &[(usize, usize)],
) -> Vec<(Word, Word)> {
    let mut rel: Vec<(Word, Word)> = Vec::new();
    for g in 0..ga.generator_count() as u16 {
        rel.push((vec![g, g], Vec::new()));
    }
    for w in ga.words() {
        if w.len() > 1 {
            rel.push((concat(&[w, w]), Vec::new()));
        }
    }
    let mut commuting: Vec<(usize, usize)> = Vec::new();
    for b in inc.blocks() {
        for (i, &u) in b.iter().enumerate() {
            for &v in &b[i + 1..] {
                commuting.push((u, v));
            }
        }
    }
    commuting.extend_from_slice(extra_commuting);
    for (u, v) in commuting {
        let (a, b) = (ga.word(u), ga.word(v));
        rel.push((concat(&[a, b]), concat(&[b, a])));
    }
    rel
}
