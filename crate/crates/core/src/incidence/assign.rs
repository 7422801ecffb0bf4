use serde::Serialize;

use super::IncidenceStructure;

/// A word over generators `O_1, O_2, …`, stored 0-based.
pub type Word = Vec<u16>;

/// Words `A_p` over free involutive generators, one per point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorAssignment {
    words: Vec<Word>,
    generator_count: usize,
    /// The point that introduced each generator.
    generator_points: Vec<usize>,
    /// The block whose other words determined each forced point.
    forcing_blocks: Vec<Option<usize>>,
}

impl GeneratorAssignment {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, point: usize) -> &[u16] {
        &self.words[point]
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn generator_points(&self) -> &[usize] {
        &self.generator_points
    }

    /// `None` for points that introduced a generator.
    pub fn forcing_block(&self, point: usize) -> Option<usize> {
        self.forcing_blocks[point]
    }
}

/// Renders `[0, 1, 3]` as `O1O2O4` and the empty word as `ε`.
pub fn format_word(w: &[u16]) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.iter().map(|&g| format!("O{}", g + 1)).collect()
}

/// Appends `w` to `acc`, cancelling adjacent equal letters.
pub(crate) fn push_word(acc: &mut Word, w: &[u16]) {
    for &g in w {
        if acc.last() == Some(&g) {
            acc.pop();
        } else {
            acc.push(g);
        }
    }
}

/// Greedy assignment: while some block lacks exactly one word, the lowest
/// such point receives the product of the other words of the lowest such
/// block; otherwise the lowest unassigned point receives a new generator.
pub fn assign_generators(inc: &IncidenceStructure) -> GeneratorAssignment {
    let n = inc.point_count();
    let mut words: Vec<Option<Word>> = vec![None; n];
    let mut generator_points = Vec::new();
    let mut forcing_blocks = vec![None; n];
    let mut blocks_of = vec![Vec::new(); n];
    for (k, b) in inc.blocks().iter().enumerate() {
        for &p in b {
            blocks_of[p].push(k);
        }
    }
    let mut assigned = 0;
    while assigned < n {
        let forced = (0..n).filter(|&p| words[p].is_none()).find_map(|p| {
            blocks_of[p]
                .iter()
                .find(|&&k| inc.blocks()[k].iter().all(|&q| q == p || words[q].is_some()))
                .map(|&k| (p, k))
        });
        match forced {
            Some((p, k)) => {
                let mut w = Word::new();
                for &q in inc.blocks()[k].iter().filter(|&&q| q != p) {
                    push_word(&mut w, words[q].as_ref().unwrap());
                }
                words[p] = Some(w);
                forcing_blocks[p] = Some(k);
            }
            None => {
                let p = words.iter().position(Option::is_none).unwrap();
                words[p] = Some(vec![generator_points.len() as u16]);
                generator_points.push(p);
            }
        }
        assigned += 1;
    }
    GeneratorAssignment {
        words: words.into_iter().map(Option::unwrap).collect(),
        generator_count: generator_points.len(),
        generator_points,
        forcing_blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ga: &GeneratorAssignment) -> Vec<String> {
        ga.words().iter().map(|w| format_word(w)).collect()
    }

    #[test]
    fn pasch_needs_three_generators() {
        let ga = assign_generators(&IncidenceStructure::pasch());
        assert_eq!(ga.generator_count(), 3);
        assert_eq!(words(&ga), ["O1", "O2", "O1O2", "O3", "O1O3", "O2O3"]);
    }

    #[test]
    fn grid_corner_is_the_four_letter_word() {
        let ga = assign_generators(&IncidenceStructure::grid());
        assert_eq!(ga.generator_count(), 4);
        assert_eq!(words(&ga), ["O1", "O2", "O1O2", "O3", "O4", "O3O4", "O1O3", "O2O4", "O1O2O3O4"]);
        assert_eq!(ga.generator_points(), &[0, 1, 3, 4]);
    }
}
