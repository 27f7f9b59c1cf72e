//! Finite group presentations: edge-path presentations of simplicial complexes,
//! sound Tietze simplification, and abelianization.
//!
//! Text format: a header line `generators: a b c`, then one relation per line as
//! whitespace-separated tokens. A generator name may be followed by an integer
//! exponent token, so `a b -1 a -1 b` is `a b⁻¹ a⁻¹ b`. A line `1` is the empty
//! relation.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::homology::{smith_normal_form, HomologyGroup, IntegerMatrix};
use crate::simplicial::{SimplicialComplex, VertexId};

/// Letters are `(generator, ±1)`; words are kept freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<(usize, i8)>);

impl Word {
    pub fn new(letters: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for (g, e) in letters {
            assert!(e == 1 || e == -1, "exponents are ±1");
            if out.last() == Some(&(g, -e)) {
                out.pop();
            } else {
                out.push((g, e));
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Removes matching letters from the two ends.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = &self.0[..];
        while s.len() >= 2 {
            let (first, last) = (s[0], s[s.len() - 1]);
            if first.0 == last.0 && first.1 == -last.1 {
                s = &s[1..s.len() - 1];
            } else {
                break;
            }
        }
        Word(s.to_vec())
    }

    /// Least representative among cyclic rotations of the word and its inverse,
    /// used to spot duplicate relators.
    fn cyclic_key(&self) -> Word {
        let w = self.cyclically_reduced();
        let inv = w.inverse();
        let n = w.len();
        (0..n.max(1))
            .flat_map(|k| {
                let rot = |v: &Word| {
                    let mut x = v.0.clone();
                    let len = x.len();
                    x.rotate_left(k.min(len));
                    Word(x)
                };
                [rot(&w), rot(&inv)]
            })
            .min()
            .unwrap_or_default()
    }

    fn exponent_sums(&self, gens: usize) -> Vec<i64> {
        let mut v = vec![0i64; gens];
        for &(g, e) in &self.0 {
            v[g] += e as i64;
        }
        v
    }

    fn substitute(&self, g: usize, image: &Word) -> Word {
        let inv = image.inverse();
        let mut out = Vec::new();
        for &(h, e) in &self.0 {
            if h == g {
                out.extend_from_slice(if e == 1 { &image.0 } else { &inv.0 });
            } else {
                out.push((h, e));
            }
        }
        Word::new(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: Vec<Word>) -> Result<Self> {
        let p = Presentation { generators, relations };
        p.check_words(&p.relations)?;
        Ok(p)
    }

    fn check_words(&self, words: &[Word]) -> Result<()> {
        for w in words {
            if let Some(&(g, _)) = w.letters().iter().find(|&&(g, _)| g >= self.generators.len()) {
                return Err(Error::InvalidInput(format!(
                    "letter {g} outside the {} generators",
                    self.generators.len()
                )));
            }
        }
        Ok(())
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// A presentation with no generators presents the trivial group.
    pub fn is_evidently_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let tokens: Vec<String> = w
            .letters()
            .iter()
            .map(|&(g, e)| if e == 1 { self.generators[g].clone() } else { format!("{} -1", self.generators[g]) })
            .collect();
        tokens.join(" ")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::InvalidInput("empty presentation".into()))?;
        let names = header
            .strip_prefix("generators:")
            .ok_or_else(|| Error::InvalidInput(format!("expected `generators:` header, got {header:?}")))?;
        let generators: Vec<String> = names.split_whitespace().map(str::to_string).collect();
        let index: HashMap<&str, usize> = generators.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        if index.len() != generators.len() {
            return Err(Error::InvalidInput("repeated generator name".into()));
        }
        if let Some(bad) = generators.iter().find(|g| g.parse::<i64>().is_ok()) {
            return Err(Error::InvalidInput(format!("generator name {bad:?} is numeric")));
        }
        let mut relations = Vec::new();
        for line in lines {
            let mut letters: Vec<(usize, i8)> = Vec::new();
            let mut last: Option<usize> = None;
            for tok in line.split_whitespace() {
                if let Ok(k) = tok.parse::<i64>() {
                    match last.take() {
                        Some(g) => {
                            letters.pop();
                            let e = if k < 0 { -1 } else { 1 };
                            letters.extend(std::iter::repeat_n((g, e), k.unsigned_abs() as usize));
                        }
                        None if k == 1 && line.split_whitespace().count() == 1 => {}
                        None => return Err(Error::InvalidInput(format!("stray exponent in {line:?}"))),
                    }
                } else {
                    let g = *index.get(tok).ok_or_else(|| Error::InvalidInput(format!("unknown generator {tok:?}")))?;
                    letters.push((g, 1));
                    last = Some(g);
                }
            }
            relations.push(Word::new(letters));
        }
        Ok(Presentation { generators, relations })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generators:")?;
        for g in &self.generators {
            write!(f, " {g}")?;
        }
        writeln!(f)?;
        for r in &self.relations {
            writeln!(f, "{}", self.word_to_string(r))?;
        }
        Ok(())
    }
}

/// Edge-path presentation of `π₁(K, basepoint)`. The spanning tree is grown
/// breadth-first with neighbors in increasing order; each remaining edge `u < w`
/// is a generator `e<u>_<w>` read from `u` to `w`, and each triangle contributes
/// its boundary word.
pub fn fundamental_group_presentation(k: &SimplicialComplex, basepoint: VertexId) -> Result<Presentation> {
    let n = k.num_vertices();
    if basepoint as usize >= n {
        return Err(Error::InvalidInput(format!("basepoint {basepoint} outside {n} vertices")));
    }
    let adj = k.adjacency();
    let mut seen = vec![false; n];
    let mut tree: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut queue = VecDeque::from([basepoint]);
    seen[basepoint as usize] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                tree.insert((u.min(w), u.max(w)));
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Disconnected);
    }
    let mut generators = Vec::new();
    let mut gen_of: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for e in k.faces(1) {
        let (u, w) = (e.vertices()[0], e.vertices()[1]);
        if !tree.contains(&(u, w)) {
            gen_of.insert((u, w), generators.len());
            generators.push(format!("e{u}_{w}"));
        }
    }
    let step = |u: VertexId, w: VertexId| -> Option<(usize, i8)> {
        if u < w {
            gen_of.get(&(u, w)).map(|&g| (g, 1))
        } else {
            gen_of.get(&(w, u)).map(|&g| (g, -1))
        }
    };
    let relations = k
        .faces(2)
        .iter()
        .map(|t| {
            let [a, b, c] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
            Word::new([step(a, b), step(b, c), step(c, a)].into_iter().flatten())
        })
        .collect();
    Ok(Presentation { generators, relations })
}

/// Abelianization: the cokernel of the exponent-sum matrix.
pub fn abelianization(p: &Presentation) -> HomologyGroup {
    let n = p.num_generators();
    let mut m = IntegerMatrix::zeros(p.relations.len(), n);
    for (i, r) in p.relations.iter().enumerate() {
        for (g, s) in r.exponent_sums(n).into_iter().enumerate() {
            if s != 0 {
                m.set(i, g, s);
            }
        }
    }
    HomologyGroup::cokernel(n, &smith_normal_form(&m))
}

/// Simplifies with sound moves only: free and cyclic reduction, removal of empty
/// and duplicate relators, and elimination of a generator through a relator of
/// length 1 (`g = 1`) or length 2 (`g = h^±1`). Each elimination costs one step.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    let mut gens = p.generators.clone();
    let mut rels: Vec<Word> = p.relations.clone();
    let mut steps = 0;
    loop {
        let mut keys = HashSet::new();
        rels = rels
            .iter()
            .map(Word::cyclically_reduced)
            .filter(|r| !r.is_empty() && keys.insert(r.cyclic_key()))
            .collect();
        if steps >= budget {
            break;
        }
        let pick = rels.iter().enumerate().find_map(|(i, r)| match *r.letters() {
            [(g, _)] => Some((i, g, Word::default())),
            [(x, a), (y, b)] if x != y => {
                // x^a y^b = 1, so x = y^(−ab).
                Some((i, x, Word::new([(y, -a * b)])))
            }
            _ => None,
        });
        let Some((i, g, image)) = pick else { break };
        rels.remove(i);
        rels = rels.iter().map(|r| r.substitute(g, &image)).collect();
        gens.remove(g);
        let shift = |w: &Word| Word(w.0.iter().map(|&(h, e)| (if h > g { h - 1 } else { h }, e)).collect());
        rels = rels.iter().map(shift).collect();
        steps += 1;
    }
    Presentation { generators: gens, relations: rels }
}

/// `⟨S | R ∪ T_Z⟩`: the base relations followed by the words of `t` picked by the
/// 0-based indices in `selector`, in selector order.
pub fn build_hz(base: &Presentation, t: &[Word], selector: &[usize]) -> Result<Presentation> {
    base.check_words(t)?;
    let mut relations = base.relations.clone();
    for &i in selector {
        let w = t.get(i).ok_or(Error::SelectorOutOfRange { index: i, len: t.len() })?;
        relations.push(w.clone());
    }
    Ok(Presentation { generators: base.generators.clone(), relations })
}
