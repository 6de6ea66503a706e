//! Entity dictionary, type hierarchy and dictionary-driven pre-annotation.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{tokenize, Sentence, Token};
use crate::error::{Error, Result};
use crate::nerdata::tags_from_spans;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MentionSource {
    Gazetteer,
    Gold,
    Hyperlink,
    External,
}

/// A typed token span `[start, end)` within one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntityMention {
    pub doc_id: String,
    pub sentence_index: usize,
    pub start: usize,
    pub end: usize,
    pub entity_type: String,
    pub source: MentionSource,
}

impl EntityMention {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Default, Clone)]
struct TrieNode {
    children: HashMap<Box<str>, u32>,
    /// Sorted ids into `Gazetteer::type_names`; non-empty iff a surface ends here.
    types: Vec<u32>,
}

/// Surface form (token sequence) to entity-type dictionary, stored as a
/// token-level prefix trie.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    nodes: Vec<TrieNode>,
    type_names: Vec<String>,
    type_ids: HashMap<String, u32>,
    entries: usize,
    max_len: usize,
    specialized: BTreeSet<String>,
}

impl Default for Gazetteer {
    fn default() -> Self {
        Gazetteer {
            nodes: vec![TrieNode::default()],
            type_names: Vec::new(),
            type_ids: HashMap::new(),
            entries: 0,
            max_len: 0,
            specialized: BTreeSet::new(),
        }
    }
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a gazetteer from `(surface, type)` pairs; surfaces are
    /// tokenized with [`tokenize`].
    pub fn from_entries<'a, I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut g = Gazetteer::new();
        for (surface, ty) in entries {
            g.insert(surface, ty)?;
        }
        Ok(g)
    }

    /// Adds one `(surface, type)` pair. Re-adding an existing pair is a no-op.
    pub fn insert(&mut self, surface: &str, entity_type: &str) -> Result<()> {
        let tokens = tokenize(surface);
        let words: Vec<&str> = tokens.iter().map(Token::as_str).collect();
        self.insert_tokens(&words, entity_type)
    }

    pub fn insert_tokens(&mut self, surface: &[&str], entity_type: &str) -> Result<()> {
        if surface.is_empty() {
            return Err(Error::Invalid("gazetteer surface form is empty".into()));
        }
        let entity_type = entity_type.trim();
        if entity_type.is_empty() {
            return Err(Error::Invalid("gazetteer entity type is empty".into()));
        }
        let type_id = match self.type_ids.get(entity_type) {
            Some(&id) => id,
            None => {
                let id = self.type_names.len() as u32;
                self.type_names.push(entity_type.to_string());
                self.type_ids.insert(entity_type.to_string(), id);
                id
            }
        };

        let mut node = 0usize;
        for &word in surface {
            node = match self.nodes[node].children.get(word) {
                Some(&next) => next as usize,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(TrieNode::default());
                    self.nodes[node].children.insert(word.into(), next as u32);
                    next
                }
            };
        }
        let types = &mut self.nodes[node].types;
        if types.is_empty() {
            self.entries += 1;
        }
        if let Err(pos) = types.binary_search(&type_id) {
            types.insert(pos, type_id);
        }
        self.max_len = self.max_len.max(surface.len());
        Ok(())
    }

    /// Number of distinct surface forms.
    pub fn len(&self) -> usize {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries == 0
    }

    /// Length in tokens of the longest surface form.
    pub fn max_surface_len(&self) -> usize {
        self.max_len
    }

    /// All types recorded for an exact surface, if present.
    pub fn lookup(&self, surface: &[&str]) -> Option<Vec<&str>> {
        let mut node = 0usize;
        for &word in surface {
            node = *self.nodes[node].children.get(word)? as usize;
        }
        let types = &self.nodes[node].types;
        (!types.is_empty()).then(|| self.type_strs(types).collect())
    }

    fn type_strs<'a>(&'a self, ids: &'a [u32]) -> impl Iterator<Item = &'a str> + 'a {
        ids.iter().map(|&id| self.type_names[id as usize].as_str())
    }

    /// Longest surface starting at `start`: returns its exclusive end and
    /// type ids.
    fn longest_at(&self, tokens: &[Token], start: usize) -> Option<(usize, &[u32])> {
        let mut node = 0usize;
        let mut best = None;
        for (i, tok) in tokens.iter().enumerate().skip(start) {
            match self.nodes[node].children.get(tok.text.as_str()) {
                Some(&next) => node = next as usize,
                None => break,
            }
            let types = &self.nodes[node].types;
            if !types.is_empty() {
                best = Some((i + 1, types.as_slice()));
            }
        }
        best
    }

    pub fn specialized_types(&self) -> &BTreeSet<String> {
        &self.specialized
    }

    pub fn set_specialized_types<I, S>(&mut self, types: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.specialized = types.into_iter().map(Into::into).collect();
    }

    /// Checks that every specialized type is used by some entry or named in
    /// the hierarchy.
    pub fn validate(&self, hierarchy: &TypeHierarchy) -> Result<()> {
        for ty in &self.specialized {
            if !self.type_ids.contains_key(ty) && !hierarchy.contains(ty) {
                return Err(Error::Config(format!(
                    "specialized type {ty:?} is neither a gazetteer type nor in the hierarchy"
                )));
            }
        }
        Ok(())
    }

    pub fn from_tsv<R: BufRead>(reader: R, origin: &str) -> Result<Self> {
        let mut g = Gazetteer::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let (surface, ty) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, line_no, "expected \"surface<TAB>type\""))?;
            if ty.contains('\t') {
                return Err(Error::parse(origin, line_no, "too many columns"));
            }
            g.insert(surface, ty)
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        }
        Ok(g)
    }
}

/// Loads a gazetteer TSV and, optionally, a file listing one specialized
/// type per line.
pub fn load_gazetteer(
    path: impl AsRef<Path>,
    specialized_path: Option<&Path>,
) -> Result<Gazetteer> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut g = Gazetteer::from_tsv(BufReader::new(file), &path.display().to_string())?;
    if let Some(sp) = specialized_path {
        g.set_specialized_types(read_type_list(sp)?);
    }
    Ok(g)
}

/// Reads one non-empty, trimmed entry per line.
pub fn read_type_list(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

/// Child-to-parent specificity relation over entity types (a forest).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeHierarchy {
    parent_of: HashMap<String, String>,
}

impl TypeHierarchy {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a hierarchy from `(child, parent)` pairs, rejecting cycles and
    /// children with two different parents.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut h = TypeHierarchy::new();
        for (child, parent) in pairs {
            h.add(child.into(), parent.into())?;
        }
        Ok(h)
    }

    fn add(&mut self, child: String, parent: String) -> Result<()> {
        if child.is_empty() || parent.is_empty() {
            return Err(Error::Invalid(
                "hierarchy type names must be non-empty".into(),
            ));
        }
        if let Some(existing) = self.parent_of.get(&child) {
            if *existing == parent {
                return Ok(());
            }
            return Err(Error::Invalid(format!(
                "type {child:?} has two parents: {existing:?} and {parent:?}"
            )));
        }
        if child == parent || self.ancestors(&parent).any(|a| a == child) {
            return Err(Error::Invalid(format!(
                "edge {child:?} -> {parent:?} creates a cycle"
            )));
        }
        self.parent_of.insert(child, parent);
        Ok(())
    }

    pub fn parent(&self, ty: &str) -> Option<&str> {
        self.parent_of.get(ty).map(String::as_str)
    }

    /// Strict ancestors of `ty`, nearest first.
    pub fn ancestors<'a>(&'a self, ty: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        std::iter::successors(self.parent(ty), |t| self.parent(t))
    }

    /// True when `ancestor` is a strict ancestor of `ty`.
    pub fn is_ancestor(&self, ancestor: &str, ty: &str) -> bool {
        self.ancestors(ty).any(|a| a == ancestor)
    }

    pub fn contains(&self, ty: &str) -> bool {
        self.parent_of.contains_key(ty) || self.parent_of.values().any(|p| p == ty)
    }

    pub fn is_empty(&self) -> bool {
        self.parent_of.is_empty()
    }

    pub fn from_tsv<R: BufRead>(reader: R, origin: &str) -> Result<Self> {
        let mut h = TypeHierarchy::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let (child, parent) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, line_no, "expected \"child<TAB>parent\""))?;
            h.add(child.trim().to_string(), parent.trim().to_string())
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        }
        Ok(h)
    }
}

pub fn load_hierarchy(path: impl AsRef<Path>) -> Result<TypeHierarchy> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    TypeHierarchy::from_tsv(BufReader::new(file), &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedType {
    pub entity_type: String,
    /// Set when more than one most-specific candidate remained.
    pub ambiguous: bool,
}

/// Picks the most specific type among `candidates`: the one that is not an
/// ancestor of any other candidate. Incomparable leftovers resolve to the
/// lexicographically smallest and are flagged. Returns `None` only for an
/// empty candidate set.
pub fn resolve_type<'a, I>(candidates: I, hierarchy: &TypeHierarchy) -> Option<ResolvedType>
where
    I: IntoIterator<Item = &'a str>,
{
    let set: BTreeSet<&str> = candidates.into_iter().collect();
    let mut specific = set
        .iter()
        .filter(|&&c| !set.iter().any(|&o| o != c && hierarchy.is_ancestor(c, o)));
    let first = specific.next()?;
    Some(ResolvedType {
        entity_type: first.to_string(),
        ambiguous: specific.next().is_some(),
    })
}

struct Match {
    start: usize,
    end: usize,
    resolved: ResolvedType,
}

fn scan(tokens: &[Token], g: &Gazetteer, h: &TypeHierarchy) -> Vec<Match> {
    let mut out = Vec::new();
    if g.is_empty() {
        return out;
    }
    let mut pos = 0;
    while pos < tokens.len() {
        match g.longest_at(tokens, pos) {
            Some((end, types)) => {
                let resolved = resolve_type(g.type_strs(types), h)
                    .expect("terminal trie nodes carry at least one type");
                out.push(Match {
                    start: pos,
                    end,
                    resolved,
                });
                pos = end;
            }
            None => pos += 1,
        }
    }
    out
}

/// Leftmost-longest, non-overlapping dictionary matches in a sentence.
pub fn find_mentions(sentence: &Sentence, g: &Gazetteer, h: &TypeHierarchy) -> Vec<EntityMention> {
    scan(&sentence.tokens, g, h)
        .into_iter()
        .map(|m| EntityMention {
            doc_id: sentence.doc_id.clone(),
            sentence_index: sentence.index,
            start: m.start,
            end: m.end,
            entity_type: m.resolved.entity_type,
            source: MentionSource::Gazetteer,
        })
        .collect()
}

/// Dictionary pre-annotation of one sentence for human review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreAnnotation {
    pub tags: Vec<String>,
    /// Hyperlinked token positions not covered by any dictionary match.
    pub review: Vec<usize>,
    /// Start positions of matches whose type resolution was ambiguous.
    pub ambiguous: Vec<usize>,
}

pub fn pre_annotate(sentence: &Sentence, g: &Gazetteer, h: &TypeHierarchy) -> PreAnnotation {
    let matches = scan(&sentence.tokens, g, h);
    let mut covered = vec![false; sentence.len()];
    for m in &matches {
        covered[m.start..m.end].iter_mut().for_each(|c| *c = true);
    }
    let spans: Vec<_> = matches
        .iter()
        .map(|m| (m.start, m.end, m.resolved.entity_type.as_str()))
        .collect();
    PreAnnotation {
        tags: tags_from_spans(sentence.len(), &spans),
        review: sentence
            .tokens
            .iter()
            .enumerate()
            .filter(|(i, t)| t.has_hyperlink && !covered[*i])
            .map(|(i, _)| i)
            .collect(),
        ambiguous: matches
            .iter()
            .filter(|m| m.resolved.ambiguous)
            .map(|m| m.start)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerdata::validate_bio;

    fn spans(ms: &[EntityMention]) -> Vec<(usize, usize, &str)> {
        ms.iter()
            .map(|m| (m.start, m.end, m.entity_type.as_str()))
            .collect()
    }

    fn politics_hierarchy() -> TypeHierarchy {
        TypeHierarchy::from_pairs([
            ("politician", "person"),
            ("band", "organization"),
            ("political party", "organization"),
        ])
        .unwrap()
    }

    #[test]
    fn load_examples() {
        let g = Gazetteer::from_tsv("".as_bytes(), "t").unwrap();
        assert!(g.is_empty());

        let g = Gazetteer::from_tsv("Mars\tastronomical object\n".as_bytes(), "t").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.lookup(&["Mars"]), Some(vec!["astronomical object"]));

        let g = Gazetteer::from_tsv(
            "Hugo Chávez\tpolitician\nHugo Chávez\tperson\nHugo Chávez\tperson\n".as_bytes(),
            "t",
        )
        .unwrap();
        assert_eq!(g.len(), 1);
        let mut types = g.lookup(&["Hugo", "Chávez"]).unwrap();
        types.sort();
        assert_eq!(types, ["person", "politician"]);
    }

    #[test]
    fn load_reports_bad_rows() {
        let err =
            Gazetteer::from_tsv("Mars\tplanet\nno tab here\n".as_bytes(), "g.tsv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Gazetteer::from_tsv("  \tplanet\n".as_bytes(), "g.tsv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn resolve_examples() {
        let h = politics_hierarchy();
        let r = resolve_type(["person"], &h).unwrap();
        assert_eq!(r.entity_type, "person");
        assert!(!r.ambiguous);
        assert_eq!(
            resolve_type(["person", "politician"], &h)
                .unwrap()
                .entity_type,
            "politician"
        );
        assert_eq!(
            resolve_type(["band", "organization"], &h)
                .unwrap()
                .entity_type,
            "band"
        );
        assert!(resolve_type([], &h).is_none());
    }

    #[test]
    fn resolve_flags_incomparable_types() {
        let h = politics_hierarchy();
        let r = resolve_type(["person", "band", "organization"], &h).unwrap();
        assert_eq!(r.entity_type, "band");
        assert!(r.ambiguous);
    }

    #[test]
    fn hierarchy_rejects_cycles_and_two_parents() {
        assert!(TypeHierarchy::from_pairs([("a", "b"), ("b", "a")]).is_err());
        assert!(TypeHierarchy::from_pairs([("a", "a")]).is_err());
        assert!(TypeHierarchy::from_pairs([("a", "b"), ("a", "c")]).is_err());
        let h = TypeHierarchy::from_pairs([("a", "b"), ("b", "c"), ("a", "b")]).unwrap();
        assert!(h.is_ancestor("c", "a"));
        assert!(!h.is_ancestor("a", "c"));
    }

    #[test]
    fn larger_span_wins() {
        let g = Gazetteer::from_entries([
            ("United Socialist Party of Venezuela", "political party"),
            ("Venezuela", "country"),
        ])
        .unwrap();
        let s = Sentence::from_words(
            "d",
            0,
            "In the subsequent election , the United Socialist Party of Venezuela drew 48 % of the votes",
        );
        let ms = find_mentions(&s, &g, &TypeHierarchy::new());
        assert_eq!(spans(&ms), [(6, 11, "political party")]);
        assert_eq!(ms[0].source, MentionSource::Gazetteer);
    }

    #[test]
    fn longest_at_position() {
        let g = Gazetteer::from_entries([("New York", "location"), ("New York City", "location")])
            .unwrap();
        let s = Sentence::from_words("d", 0, "New York City");
        assert_eq!(
            spans(&find_mentions(&s, &g, &TypeHierarchy::new())),
            [(0, 3, "location")]
        );
        let s = Sentence::from_words("d", 0, "New York state");
        assert_eq!(
            spans(&find_mentions(&s, &g, &TypeHierarchy::new())),
            [(0, 2, "location")]
        );
        assert!(find_mentions(&s, &Gazetteer::new(), &TypeHierarchy::new()).is_empty());
    }

    #[test]
    fn mentions_resolve_through_hierarchy() {
        let g = Gazetteer::from_entries([("Hugo Chávez", "person"), ("Hugo Chávez", "politician")])
            .unwrap();
        let s = Sentence::from_words("d", 3, "Hugo Chávez 's party");
        let ms = find_mentions(&s, &g, &politics_hierarchy());
        assert_eq!(spans(&ms), [(0, 2, "politician")]);
        assert_eq!(ms[0].sentence_index, 3);
    }

    #[test]
    fn pre_annotate_examples() {
        let h = TypeHierarchy::new();
        let s = Sentence::from_words("d", 0, "a b c");
        let p = pre_annotate(&s, &Gazetteer::new(), &h);
        assert_eq!(p.tags, ["O", "O", "O"]);
        assert!(p.review.is_empty());

        let g = Gazetteer::from_entries([("Pink Floyd", "band")]).unwrap();
        let mut s =
            Sentence::from_words("d", 0, "I heard that Pink Floyd played in London yesterday");
        let p = pre_annotate(&s, &g, &h);
        assert_eq!(
            p.tags,
            ["O", "O", "O", "B-band", "I-band", "O", "O", "O", "O"]
        );

        s.tokens[7].has_hyperlink = true;
        s.tokens[3].has_hyperlink = true;
        let p = pre_annotate(&s, &g, &h);
        assert_eq!(p.tags[7], "O");
        assert_eq!(p.review, [7]);
        assert!(validate_bio(&p.tags).is_ok());
    }
}
