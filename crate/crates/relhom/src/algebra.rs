//! Quivers with relations and the finite-dimensional path-algebra quotients
//! they present.
//!
//! A presentation enumerates paths up to a configured length, spans the
//! two-sided ideal generated by the relations inside that window, and keeps
//! the non-pivot paths as the canonical basis of the quotient. Reduction
//! rewrites toward shorter paths (columns are eliminated longest-first). When
//! the quiver has oriented cycles the computed basis is re-derived at a
//! smaller cutoff and must agree, otherwise the algebra is rejected as not
//! visibly finite-dimensional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A directed multigraph with labelled vertices and arrows.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::Quiver(format!("duplicate vertex label {v:?}")));
            }
        }
        let index = |name: &str| -> Result<usize> {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Quiver(format!("unknown vertex {name:?}")))
        };
        let mut arrow_names = std::collections::BTreeSet::new();
        let mut built = Vec::new();
        for (name, from, to) in arrows {
            if !arrow_names.insert(name.clone()) {
                return Err(Error::Quiver(format!("duplicate arrow label {name:?}")));
            }
            if seen.contains(&name) {
                return Err(Error::Quiver(format!(
                    "label {name:?} used for both a vertex and an arrow"
                )));
            }
            built.push(Arrow {
                source: index(&from)?,
                target: index(&to)?,
                name,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: built,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

/// One summand of a relation: a coefficient times a path, the path written
/// as its arrows in application order (first applied first).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationTerm {
    pub coeff: Scalar,
    pub arrows: Vec<usize>,
}

/// A linear combination of parallel paths of length >= 2 declared zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    pub terms: Vec<RelationTerm>,
}

/// A composable arrow sequence with its endpoints; `arrows` is in
/// application order and empty for the trivial path at `source`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Enumeration bounds for the path basis computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AlgebraLimits {
    pub max_path_length: usize,
    pub max_paths_per_length: usize,
}

impl Default for AlgebraLimits {
    fn default() -> Self {
        AlgebraLimits {
            max_path_length: 12,
            max_paths_per_length: 64,
        }
    }
}

/// Row-reduction data for rewriting path vectors into the quotient basis.
#[derive(Clone, Debug)]
struct Reducer {
    /// column position -> path index, columns ordered longest path first
    perm: Vec<usize>,
    /// path index -> column position
    inv_perm: Vec<usize>,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

/// A finite-dimensional algebra given by a quiver with relations, together
/// with the computed path basis of the quotient.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    quiver: Quiver,
    relations: Vec<Relation>,
    field: FieldSpec,
    limits: AlgebraLimits,
    paths: Vec<Path>,
    path_lookup: BTreeMap<(usize, Vec<usize>), usize>,
    reducer: Reducer,
    basis: Vec<usize>,
    basis_pos: BTreeMap<usize, usize>,
    complete: bool,
}

impl PartialEq for AlgebraPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.quiver == other.quiver
            && self.relations == other.relations
            && self.field == other.field
    }
}
impl Eq for AlgebraPresentation {}

impl AlgebraPresentation {
    pub fn new(quiver: Quiver, relations: Vec<Relation>, field: FieldSpec) -> Result<Self> {
        Self::with_limits(quiver, relations, field, AlgebraLimits::default())
    }

    pub fn with_limits(
        quiver: Quiver,
        relations: Vec<Relation>,
        field: FieldSpec,
        limits: AlgebraLimits,
    ) -> Result<Self> {
        validate_relations(&quiver, &relations, &field)?;
        let (paths, complete) = enumerate_paths(&quiver, &limits)?;
        let mut path_lookup = BTreeMap::new();
        for (i, p) in paths.iter().enumerate() {
            path_lookup.insert((p.source, p.arrows.clone()), i);
        }
        let cut = paths.iter().map(|p| p.len()).max().unwrap_or(0);
        let (reducer, basis) = span_ideal(&field, &paths, &path_lookup, &relations, cut);
        if !complete {
            if limits.max_path_length < 6 {
                return Err(Error::NotFiniteDimensional(
                    "quiver has oriented cycles; raise max_path_length to at least 6".into(),
                ));
            }
            // audit: the basis must be stable under shrinking the cutoff and
            // must sit well below it
            let (_, basis_small) = span_ideal(&field, &paths, &path_lookup, &relations, cut - 2);
            if basis_small != basis {
                return Err(Error::NotFiniteDimensional(format!(
                    "path basis does not stabilize: {} paths at cutoff {}, {} at cutoff {}",
                    basis.len(),
                    cut,
                    basis_small.len(),
                    cut - 2
                )));
            }
            let max_basis_len = basis.iter().map(|&i| paths[i].len()).max().unwrap_or(0);
            if max_basis_len + 4 > cut {
                return Err(Error::NotFiniteDimensional(format!(
                    "basis paths of length {max_basis_len} survive at cutoff {cut}"
                )));
            }
        }
        let basis_pos = basis
            .iter()
            .enumerate()
            .map(|(pos, &idx)| (idx, pos))
            .collect();
        Ok(AlgebraPresentation {
            quiver,
            relations,
            field,
            limits,
            paths,
            path_lookup,
            reducer,
            basis,
            basis_pos,
            complete,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn limits(&self) -> AlgebraLimits {
        self.limits
    }

    /// Dimension of the quotient algebra.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether path enumeration terminated on its own (acyclic quiver); if
    /// not, the basis was accepted through the stabilization audit.
    pub fn enumeration_complete(&self) -> bool {
        self.complete
    }

    /// The canonical basis paths of the quotient, ascending by (length, lex).
    pub fn basis_paths(&self) -> impl Iterator<Item = &Path> {
        self.basis.iter().map(|&i| &self.paths[i])
    }

    pub fn basis_path(&self, pos: usize) -> &Path {
        &self.paths[self.basis[pos]]
    }

    /// Rewrites `arrow . basis_path(pos)` into basis coordinates; `None`
    /// when the composite is not composable (the product is zero).
    pub fn arrow_times_basis(&self, arrow: usize, pos: usize) -> Option<Vec<(usize, Scalar)>> {
        let p = self.basis_path(pos);
        let a = &self.quiver.arrows()[arrow];
        if a.source != p.target {
            return None;
        }
        let mut arrows = p.arrows.clone();
        arrows.push(arrow);
        let idx = *self
            .path_lookup
            .get(&(p.source, arrows))
            .expect("extension path within enumerated window");
        Some(self.reduce_single(idx))
    }

    /// Reduces the class of a single enumerated path into basis coordinates.
    pub fn reduce_single(&self, path_index: usize) -> Vec<(usize, Scalar)> {
        let mut dense = vec![self.field.zero(); self.paths.len()];
        dense[path_index] = self.field.one();
        self.reduce(dense)
    }

    /// Reduces a dense vector over enumerated paths mod the relation ideal;
    /// returns sparse coordinates over the quotient basis.
    pub fn reduce(&self, dense: Vec<Scalar>) -> Vec<(usize, Scalar)> {
        let f = self.field;
        let mut v = dense;
        for (row, &pc) in self.reducer.rows.iter().zip(&self.reducer.pivots) {
            let coeff = v[self.reducer.perm[pc]].clone();
            if f.is_zero(&coeff) {
                continue;
            }
            for (c, entry) in row.iter().enumerate() {
                if !f.is_zero(entry) {
                    let idx = self.reducer.perm[c];
                    v[idx] = f.sub(&v[idx], &f.mul(&coeff, entry));
                }
            }
        }
        let mut out = Vec::new();
        for (pos, &idx) in self.basis.iter().enumerate() {
            if !f.is_zero(&v[idx]) {
                out.push((pos, v[idx].clone()));
            }
        }
        debug_assert!({
            let mut leftover = v.clone();
            for &idx in &self.basis {
                leftover[idx] = f.zero();
            }
            leftover.iter().all(|e| f.is_zero(e))
        });
        out
    }
}

fn validate_relations(
    quiver: &Quiver,
    relations: &[Relation],
    field: &FieldSpec,
) -> Result<()> {
    for (ri, rel) in relations.iter().enumerate() {
        if rel.terms.is_empty() {
            return Err(Error::Relation(format!("relation {ri} has no terms")));
        }
        let mut endpoints: Option<(usize, usize)> = None;
        for term in &rel.terms {
            if field.is_zero(&term.coeff) {
                return Err(Error::Relation(format!(
                    "relation {ri} has a zero coefficient"
                )));
            }
            if term.arrows.len() < 2 {
                return Err(Error::Relation(format!(
                    "relation {ri} contains a path of length {} (< 2)",
                    term.arrows.len()
                )));
            }
            let mut cursor = None;
            let mut source = None;
            for &a in &term.arrows {
                let arrow = quiver
                    .arrows()
                    .get(a)
                    .ok_or_else(|| Error::Relation(format!("relation {ri}: bad arrow id {a}")))?;
                if let Some(at) = cursor {
                    if arrow.source != at {
                        return Err(Error::Relation(format!(
                            "relation {ri}: path is not composable at arrow {:?}",
                            arrow.name
                        )));
                    }
                } else {
                    source = Some(arrow.source);
                }
                cursor = Some(arrow.target);
            }
            let ends = (source.unwrap(), cursor.unwrap());
            match endpoints {
                None => endpoints = Some(ends),
                Some(e) if e == ends => {}
                Some(_) => {
                    return Err(Error::Relation(format!(
                        "relation {ri}: terms do not share source and target"
                    )))
                }
            }
        }
    }
    Ok(())
}

fn enumerate_paths(quiver: &Quiver, limits: &AlgebraLimits) -> Result<(Vec<Path>, bool)> {
    let mut paths: Vec<Path> = Vec::new();
    let mut level: Vec<Path> = (0..quiver.vertex_count())
        .map(|v| Path {
            source: v,
            target: v,
            arrows: vec![],
        })
        .collect();
    let mut complete = false;
    let mut len = 0usize;
    loop {
        if level.len() > limits.max_paths_per_length {
            return Err(Error::PathBound(format!(
                "{} paths of length {len} (limit {})",
                level.len(),
                limits.max_paths_per_length
            )));
        }
        paths.extend(level.iter().cloned());
        if len == limits.max_path_length {
            break;
        }
        let mut next = Vec::new();
        for p in &level {
            for (ai, arrow) in quiver.arrows().iter().enumerate() {
                if arrow.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path {
                        source: p.source,
                        target: arrow.target,
                        arrows,
                    });
                }
            }
        }
        if next.is_empty() {
            complete = true;
            break;
        }
        level = next;
        len += 1;
    }
    Ok((paths, complete))
}

/// Spans the relation ideal inside the window of paths of length <= cut and
/// row-reduces it; returns the reducer and the basis path indices.
fn span_ideal(
    field: &FieldSpec,
    paths: &[Path],
    path_lookup: &BTreeMap<(usize, Vec<usize>), usize>,
    relations: &[Relation],
    cut: usize,
) -> (Reducer, Vec<usize>) {
    let in_window: Vec<usize> = (0..paths.len())
        .filter(|&i| paths[i].len() <= cut)
        .collect();
    // columns ordered longest-first so reduction rewrites toward shorter paths
    let mut perm: Vec<usize> = in_window.clone();
    perm.sort_by(|&a, &b| {
        paths[b]
            .len()
            .cmp(&paths[a].len())
            .then_with(|| a.cmp(&b))
    });
    let mut inv_perm = vec![usize::MAX; paths.len()];
    for (c, &idx) in perm.iter().enumerate() {
        inv_perm[idx] = c;
    }
    let ncols = perm.len();

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for rel in relations {
        let max_len = rel.terms.iter().map(|t| t.arrows.len()).max().unwrap();
        if max_len > cut {
            continue;
        }
        let (src, tgt) = {
            let t = &rel.terms[0];
            let first = t.arrows[0];
            let last = *t.arrows.last().unwrap();
            (
                path_source_of_arrow(paths, first),
                path_target_of_arrow(paths, last),
            )
        };
        for pre in paths.iter().filter(|p| p.target == src) {
            for post in paths.iter().filter(|p| p.source == tgt) {
                if pre.len() + max_len + post.len() > cut {
                    continue;
                }
                let mut dense = vec![field.zero(); ncols];
                for term in &rel.terms {
                    let mut arrows = pre.arrows.clone();
                    arrows.extend_from_slice(&term.arrows);
                    arrows.extend_from_slice(&post.arrows);
                    let idx = *path_lookup
                        .get(&(pre.source, arrows))
                        .expect("relation product path within window");
                    let c = inv_perm[idx];
                    dense[c] = field.add(&dense[c], &term.coeff);
                }
                if dense.iter().any(|e| !field.is_zero(e)) {
                    rows.push(dense);
                }
            }
        }
    }

    // in-place rref over the permuted columns
    let mut pivots: Vec<usize> = Vec::new();
    let mut rref_rows: Vec<Vec<Scalar>> = Vec::new();
    let mut work = rows;
    let mut next = 0usize;
    for col in 0..ncols {
        let Some(pick) = (next..work.len()).find(|&r| !field.is_zero(&work[r][col])) else {
            continue;
        };
        work.swap(next, pick);
        let inv = field.inv(&work[next][col]).unwrap();
        for c in 0..ncols {
            work[next][c] = field.mul(&inv, &work[next][c]);
        }
        for r in 0..work.len() {
            if r != next && !field.is_zero(&work[r][col]) {
                let factor = work[r][col].clone();
                for c in 0..ncols {
                    let v = field.sub(&work[r][c], &field.mul(&factor, &work[next][c]));
                    work[r][c] = v;
                }
            }
        }
        pivots.push(col);
        next += 1;
        if next == work.len() {
            break;
        }
    }
    work.truncate(next);
    rref_rows.extend(work);

    let pivot_paths: std::collections::BTreeSet<usize> =
        pivots.iter().map(|&c| perm[c]).collect();
    let mut basis: Vec<usize> = in_window
        .iter()
        .copied()
        .filter(|i| !pivot_paths.contains(i))
        .collect();
    basis.sort_by_key(|&i| (paths[i].len(), i));

    (
        Reducer {
            perm,
            inv_perm,
            rows: rref_rows,
            pivots,
        },
        basis,
    )
}

fn path_source_of_arrow(_paths: &[Path], _arrow: usize) -> usize {
    unreachable!("replaced below")
}

fn path_target_of_arrow(_paths: &[Path], _arrow: usize) -> usize {
    unreachable!("replaced below")
}
