//! JSON interchange.
//!
//! Multi-simplicial sets use the schema
//! `{"arity": n, "bounds": [...], "cells": {"p1,...,pn": ["label", ...]},
//!   "faces": {"dir,i": {"p1,...,pn": [...]}}, "degeneracies": {...}}`
//! with 1-based directions in keys; simplicial sets are arity-1 instances.
//! An n-fold groupoid is its arity-n core plus `"nfold": true`. Groupoids
//! and presentations use explicit object/morphism tables. All maps are
//! emitted in sorted key order, so output is byte-stable.

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::msset::TruncatedMultiSSet;
use crate::nfold::NFoldGroupoid;
use crate::presentation::{GroupoidPresentation, Step};
use crate::sset::TruncatedSSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Serialize, Deserialize)]
pub struct MultiSSetJson {
    pub arity: usize,
    pub bounds: Vec<usize>,
    /// `"p1,...,pn"` -> cell labels (length = cell count).
    pub cells: BTreeMap<String, Vec<String>>,
    /// `"dir,i"` (1-based direction) -> per-multi-index tables.
    pub faces: BTreeMap<String, BTreeMap<String, Vec<usize>>>,
    pub degeneracies: BTreeMap<String, BTreeMap<String, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nfold: bool,
}

fn index_key(p: &[usize]) -> String {
    p.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_index(s: &str, arity: usize) -> Result<Vec<usize>> {
    let p: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Format(format!("bad multi-index '{s}': {e}")))?;
    if p.len() != arity {
        return Err(Error::Format(format!(
            "multi-index '{s}' has {} entries, expected {arity}",
            p.len()
        )));
    }
    Ok(p)
}

pub fn msset_to_json(y: &TruncatedMultiSSet, nfold: bool) -> MultiSSetJson {
    let mut cells = BTreeMap::new();
    for p in y.indices() {
        let fp = y.flat(&p);
        let labels = match y.labels.get(&fp) {
            Some(names) => names.clone(),
            None => (0..y.sizes[fp]).map(|c| format!("c{c}")).collect(),
        };
        cells.insert(index_key(&p), labels);
    }
    let mut faces: BTreeMap<String, BTreeMap<String, Vec<usize>>> = BTreeMap::new();
    for (&(d, i, fp), tbl) in &y.faces {
        faces
            .entry(format!("{},{}", d + 1, i))
            .or_default()
            .insert(index_key(&y.unflat(fp)), tbl.clone());
    }
    let mut degeneracies: BTreeMap<String, BTreeMap<String, Vec<usize>>> = BTreeMap::new();
    for (&(d, i, fp), tbl) in &y.degens {
        degeneracies
            .entry(format!("{},{}", d + 1, i))
            .or_default()
            .insert(index_key(&y.unflat(fp)), tbl.clone());
    }
    MultiSSetJson {
        arity: y.arity(),
        bounds: y.bounds.clone(),
        cells,
        faces,
        degeneracies,
        nfold,
    }
}

pub fn msset_from_json(j: &MultiSSetJson) -> Result<TruncatedMultiSSet> {
    if j.bounds.len() != j.arity {
        return Err(Error::Format("bounds length != arity".into()));
    }
    let mut y = TruncatedMultiSSet::empty(j.bounds.clone());
    for (key, labels) in &j.cells {
        let p = parse_index(key, j.arity)?;
        for (d, &v) in p.iter().enumerate() {
            if v > j.bounds[d] {
                return Err(Error::Format(format!("index {key} exceeds bounds")));
            }
        }
        let fp = y.flat(&p);
        y.sizes[fp] = labels.len();
        y.labels.insert(fp, labels.clone());
    }
    let mut parse_ops = |ops: &BTreeMap<String, BTreeMap<String, Vec<usize>>>,
                         is_face: bool|
     -> Result<()> {
        for (dk, per_index) in ops {
            let parts: Vec<&str> = dk.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Format(format!("bad operator key '{dk}'")));
            }
            let d: usize = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad direction in '{dk}'")))?;
            let i: usize = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad index in '{dk}'")))?;
            if d == 0 || d > j.arity {
                return Err(Error::Format(format!("direction {d} out of range")));
            }
            for (key, tbl) in per_index {
                let p = parse_index(key, j.arity)?;
                let fp = y.flat(&p);
                if is_face {
                    y.faces.insert((d - 1, i, fp), tbl.clone());
                } else {
                    y.degens.insert((d - 1, i, fp), tbl.clone());
                }
            }
        }
        Ok(())
    };
    parse_ops(&j.faces, true)?;
    parse_ops(&j.degeneracies, false)?;
    Ok(y)
}

pub fn sset_to_json(x: &TruncatedSSet) -> MultiSSetJson {
    msset_to_json(&TruncatedMultiSSet::from_sset(x), false)
}

pub fn sset_from_json(j: &MultiSSetJson) -> Result<TruncatedSSet> {
    if j.arity != 1 {
        return Err(Error::Format(format!(
            "expected a simplicial set (arity 1), found arity {}",
            j.arity
        )));
    }
    msset_from_json(j)?.to_sset()
}

pub fn nfold_to_json(g: &NFoldGroupoid) -> MultiSSetJson {
    msset_to_json(&g.core, true)
}

pub fn nfold_from_json(j: &MultiSSetJson) -> Result<NFoldGroupoid> {
    NFoldGroupoid::from_core(msset_from_json(j)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MorphismJson {
    pub src: usize,
    pub tgt: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupoidJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    /// Identity morphism per object.
    pub id: Vec<usize>,
    pub inv: Vec<usize>,
    /// `"g,h"` -> g∘h (defined when tgt(h) = src(g)).
    pub comp: BTreeMap<String, usize>,
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> GroupoidJson {
    GroupoidJson {
        objects: match &g.object_labels {
            Some(names) => names.clone(),
            None => (0..g.n_objects).map(|o| format!("x{o}")).collect(),
        },
        morphisms: (0..g.n_morphisms())
            .map(|m| MorphismJson {
                src: g.src[m],
                tgt: g.tgt[m],
                label: g.morphism_labels.as_ref().map(|n| n[m].clone()),
            })
            .collect(),
        id: g.id.clone(),
        inv: g.inv.clone(),
        comp: g
            .comp
            .iter()
            .map(|(&(a, b), &c)| (format!("{a},{b}"), c))
            .collect(),
    }
}

pub fn groupoid_from_json(j: &GroupoidJson) -> Result<FiniteGroupoid> {
    let mut comp = BTreeMap::new();
    for (key, &c) in &j.comp {
        let parts: Vec<&str> = key.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Format(format!("bad composition key '{key}'")));
        }
        let a: usize = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad composition key '{key}'")))?;
        let b: usize = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad composition key '{key}'")))?;
        comp.insert((a, b), c);
    }
    let g = FiniteGroupoid {
        n_objects: j.objects.len(),
        src: j.morphisms.iter().map(|m| m.src).collect(),
        tgt: j.morphisms.iter().map(|m| m.tgt).collect(),
        id: j.id.clone(),
        inv: j.inv.clone(),
        comp,
        object_labels: Some(j.objects.clone()),
        morphism_labels: if j.morphisms.iter().any(|m| m.label.is_some()) {
            Some(
                j.morphisms
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.label.clone().unwrap_or_else(|| format!("m{i}")))
                    .collect(),
            )
        } else {
            None
        },
    };
    let rep = g.validate();
    if !rep.is_pass() {
        return Err(Error::Format(format!(
            "groupoid data invalid: {:?}",
            rep.violations.first()
        )));
    }
    Ok(g)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StepJson {
    pub gen: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inv: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RelationJson {
    pub lhs: Vec<StepJson>,
    #[serde(default)]
    pub rhs: Vec<StepJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub vertices: Vec<String>,
    pub generators: Vec<MorphismJson>,
    pub relations: Vec<RelationJson>,
}

pub fn presentation_to_json(p: &GroupoidPresentation) -> PresentationJson {
    let step = |s: &Step| StepJson {
        gen: s.arrow,
        inv: s.inverted,
    };
    PresentationJson {
        vertices: (0..p.n_vertices).map(|v| format!("v{v}")).collect(),
        generators: p
            .arrows
            .iter()
            .map(|&(s, t)| MorphismJson {
                src: s,
                tgt: t,
                label: None,
            })
            .collect(),
        relations: p
            .relations
            .iter()
            .map(|(lhs, rhs)| RelationJson {
                lhs: lhs.iter().map(step).collect(),
                rhs: rhs.iter().map(step).collect(),
            })
            .collect(),
    }
}

pub fn presentation_from_json(j: &PresentationJson) -> Result<GroupoidPresentation> {
    let step = |s: &StepJson| Step {
        arrow: s.gen,
        inverted: s.inv,
    };
    let p = GroupoidPresentation {
        n_vertices: j.vertices.len(),
        arrows: j.generators.iter().map(|m| (m.src, m.tgt)).collect(),
        relations: j
            .relations
            .iter()
            .map(|r| {
                (
                    r.lhs.iter().map(step).collect(),
                    r.rhs.iter().map(step).collect(),
                )
            })
            .collect(),
    };
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupTable;
    use crate::msset::ordinal_sum;

    #[test]
    fn msset_round_trip() {
        let x = FiniteGroupoid::from_group(&GroupTable::cyclic(2)).nerve(4);
        let or2 = ordinal_sum(&x, 2, &[1, 1]).unwrap();
        let j = msset_to_json(&or2, false);
        let back = msset_from_json(&j).unwrap();
        assert_eq!(or2.sizes, back.sizes);
        assert_eq!(or2.faces, back.faces);
        assert_eq!(or2.degens, back.degens);
        // byte-stable serialization
        let s1 = serde_json::to_string(&j).unwrap();
        let s2 = serde_json::to_string(&msset_to_json(&back, false)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn groupoid_round_trip() {
        let g = FiniteGroupoid::af_construction(&[0, 0, 1], 2);
        let j = groupoid_to_json(&g);
        let back = groupoid_from_json(&j).unwrap();
        assert_eq!(g.src, back.src);
        assert_eq!(g.comp, back.comp);
    }

    #[test]
    fn invalid_groupoid_rejected_on_load() {
        let g = FiniteGroupoid::from_group(&GroupTable::cyclic(3));
        let mut j = groupoid_to_json(&g);
        j.inv[1] = 1;
        assert!(matches!(groupoid_from_json(&j), Err(Error::Format(_))));
    }

    #[test]
    fn presentation_round_trip() {
        let p = GroupoidPresentation {
            n_vertices: 2,
            arrows: vec![(0, 1), (0, 0)],
            relations: vec![(vec![Step::fwd(1), Step::fwd(1)], vec![])],
        };
        let j = presentation_to_json(&p);
        let back = presentation_from_json(&j).unwrap();
        assert_eq!(p, back);
    }
}
