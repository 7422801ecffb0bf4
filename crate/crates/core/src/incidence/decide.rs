use serde::Serialize;

use super::rewrite::{knuth_bendix, RewriteSystem};
use super::{
    format_word, product_word, CompletionLimits, GeneratorAssignment, IncidenceStructure, RewriteStatus, Word,
    WordOrder,
};
use crate::exactalg::PauliOperator;
use crate::gf2::Gf2Vector;
use crate::prooffinder::{ConstraintSystem, ParityProof};
use crate::{Error, Result};

/// Observables for generators and points; every block is a constraint and
/// the blocks together form a parity proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliAssignment {
    pub qubits: usize,
    pub generators: Vec<PauliOperator>,
    /// Signed point observables `A_p`, the ordered product of the
    /// generator observables in the point's word.
    pub points: Vec<PauliOperator>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NoProofPossible,
    ProofFound(PauliAssignment),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub assignment: GeneratorAssignment,
    pub rewrite_status: RewriteStatus,
    pub rewrite_order: WordOrder,
    pub rule_count: usize,
    /// Normal form of the product over all blocks.
    pub normal_form: Word,
    /// Generator pairs that cannot commute in any proof.
    pub learned_anticommuting: Vec<(usize, usize)>,
    pub search_qubits: usize,
    pub search_nodes: u64,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub qubits: usize,
    pub node_limit: u64,
    /// Generator pairs required to anticommute.
    pub anticommuting: Vec<(usize, usize)>,
}

impl SearchOptions {
    pub fn new(qubits: usize) -> Self {
        Self { qubits, node_limit: 50_000_000, anticommuting: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(PauliAssignment, u64),
    Exhausted(u64),
    NodeLimit(u64),
}

/// `i^e X^x Z^z` on at most 8 qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Small {
    x: u16,
    z: u16,
    e: u8,
}

impl Small {
    const ONE: Small = Small { x: 0, z: 0, e: 0 };

    fn hermitian(index: u32, qubits: usize) -> Self {
        let (mut x, mut z) = (0u16, 0u16);
        for k in 0..qubits {
            x |= ((index >> (2 * k) & 1) as u16) << k;
            z |= ((index >> (2 * k + 1) & 1) as u16) << k;
        }
        Small { x, z, e: ((x & z).count_ones() % 4) as u8 }
    }

    fn mul(self, o: Small) -> Small {
        let e = (u32::from(self.e) + u32::from(o.e) + 2 * (self.z & o.x).count_ones()) % 4;
        Small { x: self.x ^ o.x, z: self.z ^ o.z, e: e as u8 }
    }

    /// `Some(negative)` when the operator is Hermitian.
    fn sign(self) -> Option<bool> {
        match (u32::from(self.e) + 4 - (self.x & self.z).count_ones() % 4) % 4 {
            0 => Some(false),
            2 => Some(true),
            _ => None,
        }
    }

    fn commutes(self, o: Small) -> bool {
        ((self.x & o.z).count_ones() + (self.z & o.x).count_ones()).is_multiple_of(2)
    }

    fn is_scalar(self) -> bool {
        self.x == 0 && self.z == 0
    }

    fn to_operator(self, qubits: usize) -> PauliOperator {
        let bits = |v: u16| Gf2Vector::from_bools(&(0..qubits).map(|k| v >> k & 1 == 1).collect::<Vec<_>>());
        PauliOperator::new(bits(self.x), bits(self.z), self.sign() == Some(true))
    }
}

fn to_small(p: &PauliOperator) -> Small {
    let n = p.qubits();
    let bits = |v: &Gf2Vector| (0..n).fold(0u16, |acc, k| acc | (u16::from(v.get(k)) << k));
    let (x, z) = (bits(p.x_bits()), bits(p.z_bits()));
    let e = ((x & z).count_ones() + if p.is_negative() { 2 } else { 0 }) % 4;
    Small { x, z, e: e as u8 }
}

/// Checks that fire once generator `k` is fixed.
#[derive(Default, Clone)]
struct Level {
    points: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    blocks: Vec<usize>,
    anticommuting: Vec<usize>,
}

struct Search<'a> {
    inc: &'a IncidenceStructure,
    ga: &'a GeneratorAssignment,
    qubits: usize,
    levels: Vec<Level>,
    gens: Vec<Small>,
    obs: Vec<Small>,
    block_sign: Vec<bool>,
    nodes: u64,
    limit: u64,
}

fn level_of(w: &[u16]) -> usize {
    w.iter().copied().max().map_or(0, usize::from)
}

impl<'a> Search<'a> {
    fn new(inc: &'a IncidenceStructure, ga: &'a GeneratorAssignment, opts: &SearchOptions) -> Self {
        let g = ga.generator_count().max(1);
        let mut levels = vec![Level::default(); g];
        for p in 0..inc.point_count() {
            levels[level_of(ga.word(p))].points.push(p);
        }
        for (k, b) in inc.blocks().iter().enumerate() {
            let lv = |p: usize| level_of(ga.word(p));
            for (i, &u) in b.iter().enumerate() {
                for &v in &b[i + 1..] {
                    levels[lv(u).max(lv(v))].pairs.push((u, v));
                }
            }
            levels[b.iter().map(|&p| lv(p)).max().unwrap_or(0)].blocks.push(k);
        }
        for (idx, &(i, j)) in opts.anticommuting.iter().enumerate() {
            levels[i.max(j)].anticommuting.push(idx);
        }
        Self {
            inc,
            ga,
            qubits: opts.qubits,
            levels,
            gens: vec![Small::ONE; g],
            obs: vec![Small::ONE; inc.point_count()],
            block_sign: vec![false; inc.block_count()],
            nodes: 0,
            limit: opts.node_limit,
        }
    }

    fn check_level(&mut self, k: usize, anticommuting: &[(usize, usize)]) -> bool {
        let level = &self.levels[k];
        for &(i, j) in level.anticommuting.iter().map(|&a| &anticommuting[a]) {
            if self.gens[i].commutes(self.gens[j]) {
                return false;
            }
        }
        for &p in &level.points {
            let o = self.ga.word(p).iter().fold(Small::ONE, |acc, &g| acc.mul(self.gens[usize::from(g)]));
            if o.sign().is_none() {
                return false;
            }
            self.obs[p] = o;
        }
        for &(u, v) in &level.pairs {
            if !self.obs[u].commutes(self.obs[v]) {
                return false;
            }
        }
        for &b in &level.blocks {
            let prod = self.inc.blocks()[b].iter().fold(Small::ONE, |acc, &p| acc.mul(self.obs[p]));
            match (prod.is_scalar(), prod.sign()) {
                (true, Some(neg)) => self.block_sign[b] = neg,
                _ => return false,
            }
        }
        true
    }

    /// Depth-first over generators; `Ok(true)` once a proof is found.
    fn run(&mut self, k: usize, anticommuting: &[(usize, usize)]) -> std::result::Result<bool, ()> {
        if k == self.gens.len() {
            return Ok(self.block_sign.iter().filter(|&&s| s).count() % 2 == 1);
        }
        let choices: Vec<u32> = if k == 0 { vec![1] } else { (1..1u32 << (2 * self.qubits)).collect() };
        for c in choices {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(());
            }
            self.gens[k] = Small::hermitian(c, self.qubits);
            if self.check_level(k, anticommuting) && self.run(k + 1, anticommuting)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Depth-first search for generator observables on `opts.qubits` qubits.
///
/// Generator 1 is fixed to `X` on the first qubit, which loses nothing:
/// Clifford conjugation acts transitively on non-identity Paulis and
/// preserves products, and generator signs do not affect any block.
pub fn search_pauli_assignment(
    inc: &IncidenceStructure,
    ga: &GeneratorAssignment,
    opts: &SearchOptions,
) -> SearchOutcome {
    assert!((1..=8).contains(&opts.qubits), "the Pauli search supports 1 to 8 qubits");
    let mut s = Search::new(inc, ga, opts);
    match s.run(0, &opts.anticommuting) {
        Ok(true) => {
            let generators: Vec<_> = s.gens.iter().map(|g| g.to_operator(opts.qubits)).collect();
            let points = s.obs.iter().map(|o| o.to_operator(opts.qubits)).collect();
            let a = PauliAssignment { qubits: opts.qubits, generators, points };
            SearchOutcome::Found(a, s.nodes)
        }
        Ok(false) => SearchOutcome::Exhausted(s.nodes),
        Err(()) => SearchOutcome::NodeLimit(s.nodes),
    }
}

/// Evaluates a concrete generator choice; returns the assignment when all
/// blocks are constraints and they multiply to `−I` overall.
pub fn check_pauli_assignment(
    inc: &IncidenceStructure,
    ga: &GeneratorAssignment,
    generators: &[PauliOperator],
) -> Option<PauliAssignment> {
    let qubits = generators.first()?.qubits();
    if generators.len() != ga.generator_count() || generators.iter().any(|g| g.qubits() != qubits) || qubits > 8 {
        return None;
    }
    let mut s = Search::new(inc, ga, &SearchOptions::new(qubits));
    for (k, g) in generators.iter().enumerate() {
        s.gens[k] = to_small(g);
        if !s.check_level(k, &[]) {
            return None;
        }
    }
    (s.block_sign.iter().filter(|&&b| b).count() % 2 == 1).then(|| PauliAssignment {
        qubits,
        generators: generators.to_vec(),
        points: s.obs.iter().map(|o| o.to_operator(qubits)).collect(),
    })
}

/// Rebuilds every block as an exact-matrix constraint and validates the
/// full block set as a parity proof.
fn validate_exact(inc: &IncidenceStructure, a: &PauliAssignment) -> Result<ParityProof> {
    let matrices = a.points.iter().map(PauliOperator::to_matrix).collect();
    let cs = ConstraintSystem::explicit("incidence", matrices, inc.blocks())?;
    if cs.constraint_count() != inc.block_count() {
        return Err(Error::Invariant("pruning removed blocks of a cubic structure".into()));
    }
    let all: Vec<usize> = (0..cs.constraint_count()).collect();
    ParityProof::validate(&cs, &all)
}

pub fn decide_structure(inc: &IncidenceStructure, search_qubits: usize) -> Result<Decision> {
    decide_structure_with(inc, search_qubits, &CompletionLimits::default(), 50_000_000)
}

/// Caps for the first completion attempt and for learning anticommutations.
pub const QUICK_LIMITS: CompletionLimits =
    CompletionLimits { max_rules: 2_000, max_length: 32, order: WordOrder::Recursive };

/// Orders tried in turn when completing a presentation.
pub const ORDER_PORTFOLIO: [WordOrder; 3] = [WordOrder::Recursive, WordOrder::RecursiveDescending, WordOrder::Shortlex];

struct Certificate {
    sys: RewriteSystem,
    order: WordOrder,
    normal_form: Word,
}

/// The first complete system in the portfolio, else the first capped one
/// reducing `target` to the empty word, else the first attempt.
fn certify(
    ga: &GeneratorAssignment,
    inc: &IncidenceStructure,
    target: &[u16],
    limits: &CompletionLimits,
) -> Certificate {
    let mut best: Option<Certificate> = None;
    for order in ORDER_PORTFOLIO {
        let sys = knuth_bendix(ga, inc, &[], &CompletionLimits { order, ..*limits });
        let normal_form = sys.reduce(target);
        let c = Certificate { sys, order, normal_form };
        if c.sys.is_complete() {
            return c;
        }
        let trivial = c.normal_form.is_empty();
        if best.as_ref().is_none_or(|b| trivial && !b.normal_form.is_empty()) {
            best = Some(c);
        }
    }
    best.expect("portfolio is not empty")
}

/// Rewriting under quick caps, then a Pauli search, then rewriting under
/// `limits`.
///
/// Every rule produced by completion is a consequence of the relations, so
/// reducing the block product to the empty word settles the structure
/// whether or not completion finished; the report says which. A complete
/// system with a non-empty normal form shows the product is not the
/// identity.
pub fn decide_structure_with(
    inc: &IncidenceStructure,
    search_qubits: usize,
    limits: &CompletionLimits,
    node_limit: u64,
) -> Result<Decision> {
    let ga = super::assign_generators(inc);
    let target = product_word(&ga, inc);
    let quick = CompletionLimits {
        max_rules: QUICK_LIMITS.max_rules.min(limits.max_rules),
        max_length: QUICK_LIMITS.max_length.min(limits.max_length),
        order: limits.order,
    };
    let widen = limits.max_rules > quick.max_rules || limits.max_length > quick.max_length;
    let mut cert = certify(&ga, inc, &target, &quick);
    if cert.normal_form.is_empty() && !cert.sys.is_complete() && widen {
        let wide = certify(&ga, inc, &target, limits);
        if wide.normal_form.is_empty() {
            cert = wide;
        }
    }
    let mut d = Decision {
        verdict: Verdict::Inconclusive(String::new()),
        rewrite_status: cert.sys.status(),
        rewrite_order: cert.order,
        rule_count: cert.sys.rule_count(),
        normal_form: cert.normal_form.clone(),
        learned_anticommuting: Vec::new(),
        search_qubits,
        search_nodes: 0,
        assignment: ga,
    };
    if d.normal_form.is_empty() {
        d.verdict = Verdict::NoProofPossible;
        return Ok(d);
    }
    let ga = &d.assignment;
    let g = ga.generator_count();
    let gp = ga.generator_points();
    let learn = CompletionLimits { order: cert.order, ..quick };
    for i in 0..g {
        for j in i + 1..g {
            let (a, b) = ([i as u16, j as u16], [j as u16, i as u16]);
            if cert.sys.reduce(&a) == cert.sys.reduce(&b) {
                continue;
            }
            let extra = knuth_bendix(ga, inc, &[(gp[i], gp[j])], &learn);
            if extra.reduce(&target).is_empty() {
                d.learned_anticommuting.push((i, j));
            }
        }
    }
    let opts = SearchOptions { qubits: search_qubits, node_limit, anticommuting: d.learned_anticommuting.clone() };
    let outcome = search_pauli_assignment(inc, ga, &opts);
    d.search_nodes = match &outcome {
        SearchOutcome::Found(_, n) | SearchOutcome::Exhausted(n) | SearchOutcome::NodeLimit(n) => *n,
    };
    if let SearchOutcome::Found(a, _) = outcome {
        validate_exact(inc, &a)?;
        d.verdict = Verdict::ProofFound(a);
        return Ok(d);
    }
    if !cert.sys.is_complete() && widen {
        let wide = certify(&d.assignment, inc, &target, limits);
        d.rewrite_status = wide.sys.status();
        d.rewrite_order = wide.order;
        d.rule_count = wide.sys.rule_count();
        d.normal_form = wide.normal_form;
        if d.normal_form.is_empty() {
            d.verdict = Verdict::NoProofPossible;
            return Ok(d);
        }
    }
    let why = match outcome {
        SearchOutcome::NodeLimit(n) => format!("search stopped after {n} nodes"),
        _ if d.rewrite_status == RewriteStatus::Complete => {
            format!("block product is not the identity but no assignment on {search_qubits} qubits")
        }
        _ => format!("completion capped and no assignment on {search_qubits} qubits"),
    };
    d.verdict = Verdict::Inconclusive(why);
    Ok(d)
}

#[derive(Clone, Debug, Serialize)]
pub struct PauliJson {
    pub pauli: String,
    pub x: String,
    pub z: String,
}

impl From<&PauliOperator> for PauliJson {
    fn from(p: &PauliOperator) -> Self {
        Self { pauli: p.to_string(), x: p.x_bits().to_bit_string(), z: p.z_bits().to_bit_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecisionReport {
    pub verdict: &'static str,
    pub points: usize,
    pub blocks: Vec<Vec<usize>>,
    pub generator_words: Vec<String>,
    pub rewrite_status: RewriteStatus,
    pub rewrite_order: WordOrder,
    pub rewrite_rules: usize,
    pub product_normal_form: String,
    /// `complete` when the rewrite system is confluent, `derivation` when a
    /// capped system still reduces the block product to the empty word.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<&'static str>,
    pub learned_anticommuting: Vec<(usize, usize)>,
    pub search_qubits: usize,
    pub search_nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<PauliJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_observables: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Decision {
    pub fn is_proof(&self) -> bool {
        matches!(self.verdict, Verdict::ProofFound(_))
    }

    pub fn report(&self, inc: &IncidenceStructure) -> DecisionReport {
        let (verdict, a, reason) = match &self.verdict {
            Verdict::NoProofPossible => ("NoProofPossible", None, None),
            Verdict::ProofFound(a) => ("ProofFound", Some(a), None),
            Verdict::Inconclusive(r) => ("Inconclusive", None, Some(r.clone())),
        };
        DecisionReport {
            verdict,
            points: inc.point_count(),
            blocks: inc.blocks().to_vec(),
            generator_words: self.assignment.words().iter().map(|w| format_word(w)).collect(),
            rewrite_status: self.rewrite_status,
            rewrite_order: self.rewrite_order,
            rewrite_rules: self.rule_count,
            product_normal_form: format_word(&self.normal_form),
            certificate: match (&self.verdict, self.rewrite_status) {
                (Verdict::NoProofPossible, RewriteStatus::Complete) => Some("complete"),
                (Verdict::NoProofPossible, RewriteStatus::Capped) => Some("derivation"),
                _ => None,
            },
            learned_anticommuting: self.learned_anticommuting.clone(),
            search_qubits: self.search_qubits,
            search_nodes: self.search_nodes,
            generators: a.map(|a| a.generators.iter().map(PauliJson::from).collect()),
            point_observables: a.map(|a| a.points.iter().map(ToString::to_string).collect()),
            reason,
        }
    }
}
