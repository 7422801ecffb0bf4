//! Todd-Coxeter coset enumeration over the trivial subgroup for groups
//! generated by involutions.

const NONE: u32 = u32::MAX;

/// The right regular action of a finite group on its elements.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    generators: usize,
    /// `act[x * generators + g]` is the element `x·g`; element 0 is `1`.
    act: Vec<u32>,
}

impl CayleyTable {
    pub fn order(&self) -> usize {
        self.act.len() / self.generators.max(1)
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn act(&self, x: usize, g: u16) -> usize {
        self.act[x * self.generators + usize::from(g)] as usize
    }

    /// Image of the identity under `w`.
    pub fn evaluate(&self, w: &[u16]) -> usize {
        w.iter().fold(0, |x, &g| self.act(x, g))
    }
}

struct Enumeration {
    g: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    limit: usize,
    queue: Vec<(u32, u32)>,
}

impl Enumeration {
    fn get(&self, c: u32, g: u16) -> u32 {
        self.table[c as usize * self.g + usize::from(g)]
    }

    fn link(&mut self, a: u32, g: u16, b: u32) {
        self.table[a as usize * self.g + usize::from(g)] = b;
        self.table[b as usize * self.g + usize::from(g)] = a;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn find(&mut self, mut c: u32) -> u32 {
        while self.parent[c as usize] != c {
            let p = self.parent[c as usize];
            self.parent[c as usize] = self.parent[p as usize];
            c = p;
        }
        c
    }

    fn define(&mut self, c: u32, g: u16) -> Option<u32> {
        if self.live >= self.limit {
            return None;
        }
        let n = self.parent.len() as u32;
        self.parent.push(n);
        self.table.extend(std::iter::repeat_n(NONE, self.g));
        self.live += 1;
        self.link(c, g, n);
        Some(n)
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.push((a, b));
        while let Some((a, b)) = self.queue.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (a, b) = (a.min(b), a.max(b));
            self.parent[b as usize] = a;
            self.live -= 1;
            for g in 0..self.g as u16 {
                let c = self.get(b, g);
                if c == NONE {
                    continue;
                }
                self.table[b as usize * self.g + usize::from(g)] = NONE;
                if c != b {
                    self.table[c as usize * self.g + usize::from(g)] = NONE;
                }
                let c = if c == b { a } else { c };
                match self.get(a, g) {
                    NONE => self.link(a, g, c),
                    d if d != c => self.queue.push((c, d)),
                    _ => {}
                }
            }
        }
    }

    /// Scans relator `r` from coset `c`, filling gaps; false on the limit.
    fn scan_and_fill(&mut self, c: u32, r: &[u16]) -> bool {
        loop {
            if !self.alive(c) {
                return true;
            }
            let (mut f, mut i) = (c, 0);
            while i < r.len() && self.get(f, r[i]) != NONE {
                f = self.get(f, r[i]);
                i += 1;
            }
            if i == r.len() {
                if f != c {
                    self.coincidence(f, c);
                }
                return true;
            }
            let (mut b, mut j) = (c, r.len());
            while j > i && self.get(b, r[j - 1]) != NONE {
                b = self.get(b, r[j - 1]);
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return true;
            }
            if j == i + 1 {
                self.link(f, r[i], b);
                return true;
            }
            if self.define(f, r[i]).is_none() {
                return false;
            }
        }
    }
}

/// Enumerates `⟨g_0, …, g_{k−1} | g_i², relators⟩`; `None` if more than
/// `max_cosets` cosets are alive at once.
pub fn enumerate_involution_group(generators: usize, relators: &[Vec<u16>], max_cosets: usize) -> Option<CayleyTable> {
    let mut e = Enumeration {
        g: generators,
        table: vec![NONE; generators],
        parent: vec![0],
        live: 1,
        limit: max_cosets.max(1),
        queue: Vec::new(),
    };
    let mut c = 0u32;
    while (c as usize) < e.parent.len() {
        if e.alive(c) {
            for r in relators {
                if !e.scan_and_fill(c, r) {
                    return None;
                }
                if !e.alive(c) {
                    break;
                }
            }
            for g in 0..generators as u16 {
                if e.alive(c) && e.get(c, g) == NONE && e.define(c, g).is_none() {
                    return None;
                }
            }
        }
        c += 1;
    }
    // Compact live cosets in order; coset 0 is the identity.
    let mut index = vec![NONE; e.parent.len()];
    let mut next = 0u32;
    for (c, slot) in index.iter_mut().enumerate() {
        if e.alive(c as u32) {
            *slot = next;
            next += 1;
        }
    }
    let mut act = Vec::with_capacity(next as usize * generators);
    for c in 0..e.parent.len() {
        if e.alive(c as u32) {
            for g in 0..generators as u16 {
                let d = e.get(c as u32, g);
                let d = e.find(d);
                act.push(index[d as usize]);
            }
        }
    }
    Some(CayleyTable { generators, act })
}
