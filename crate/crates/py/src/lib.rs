//! Python bindings: the main types and operations of the toolkit.

use nfold_core::compare::{classify, discretize_psg, PseudoNFold};
use nfold_core::error::Error;
use nfold_core::fibrancy::{is_kan, is_n2_fibrant};
use nfold_core::fundamental::{fundamental_groupoid, q_n_certified, DEFAULT_BUDGET};
use nfold_core::groupoid::{groupoid_isomorphic, FiniteGroupoid, GroupTable};
use nfold_core::json::{
    groupoid_from_json, groupoid_to_json, msset_from_json, msset_to_json, nfold_from_json,
    sset_from_json, sset_to_json,
};
use nfold_core::msset::{ordinal_sum, TruncatedMultiSSet};
use nfold_core::sset::{DecSide, TruncatedSSet};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::Unbounded { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A finite truncated simplicial set.
#[pyclass]
#[derive(Clone)]
struct SimplicialSet {
    inner: TruncatedSSet,
}

#[pymethods]
impl SimplicialSet {
    #[staticmethod]
    fn standard_simplex(n: usize, bound: usize) -> Self {
        SimplicialSet {
            inner: TruncatedSSet::standard_simplex(n, bound),
        }
    }

    #[staticmethod]
    fn boundary_simplex(n: usize, bound: usize) -> Self {
        SimplicialSet {
            inner: TruncatedSSet::boundary_simplex(n, bound),
        }
    }

    #[staticmethod]
    fn from_json(data: &str) -> PyResult<Self> {
        let j = serde_json::from_str(data).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(SimplicialSet {
            inner: sset_from_json(&j).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&sset_to_json(&self.inner)).unwrap()
    }

    #[getter]
    fn sizes(&self) -> Vec<usize> {
        self.inner.sizes.clone()
    }

    #[getter]
    fn bound(&self) -> usize {
        self.inner.bound
    }

    fn validate(&self) -> (bool, String) {
        let rep = self.inner.validate();
        (rep.is_pass(), rep.to_string())
    }

    /// Horn-filling check within the given dimension bound.
    fn is_kan(&self, m_max: usize) -> (bool, String) {
        let rep = is_kan(&self.inner, m_max);
        (rep.is_pass(), rep.to_string())
    }

    #[pyo3(signature = (side = "last"))]
    fn decalage(&self, side: &str) -> PyResult<SimplicialSet> {
        let s = match side {
            "last" => DecSide::Last,
            "first" => DecSide::First,
            _ => return Err(PyValueError::new_err("side must be 'last' or 'first'")),
        };
        let (dec, _, _) = self.inner.decalage(s).map_err(err)?;
        Ok(SimplicialSet { inner: dec })
    }

    fn bar_path(&self, k: usize) -> PyResult<SimplicialSet> {
        Ok(SimplicialSet {
            inner: self.inner.bar_path(k).map_err(err)?,
        })
    }

    fn ordinal_sum(&self, n: usize, bounds: Vec<usize>) -> PyResult<MultiSimplicialSet> {
        Ok(MultiSimplicialSet {
            inner: ordinal_sum(&self.inner, n, &bounds).map_err(err)?,
        })
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn fundamental_groupoid(&self, budget: usize) -> PyResult<Groupoid> {
        Ok(Groupoid {
            inner: fundamental_groupoid(&self.inner, budget).map_err(err)?.groupoid,
        })
    }

    /// The fundamental n-fold groupoid, with a Kan certificate for the
    /// input checked within the given bound.
    #[pyo3(signature = (n, budget = DEFAULT_BUDGET, kan_bound = 3))]
    fn qn(&self, n: usize, budget: usize, kan_bound: usize) -> PyResult<(NFoldGroupoidPy, bool)> {
        let r = q_n_certified(&self.inner, n, budget, kan_bound).map_err(err)?;
        Ok((
            NFoldGroupoidPy {
                inner: r.groupoid,
            },
            r.kan_certified,
        ))
    }

    fn __repr__(&self) -> String {
        format!("SimplicialSet(bound={}, sizes={:?})", self.inner.bound, self.inner.sizes)
    }
}

/// A finite truncated multi-simplicial set.
#[pyclass]
#[derive(Clone)]
struct MultiSimplicialSet {
    inner: TruncatedMultiSSet,
}

#[pymethods]
impl MultiSimplicialSet {
    #[staticmethod]
    fn from_json(data: &str) -> PyResult<Self> {
        let j = serde_json::from_str(data).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(MultiSimplicialSet {
            inner: msset_from_json(&j).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&msset_to_json(&self.inner, false)).unwrap()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    #[getter]
    fn bounds(&self) -> Vec<usize> {
        self.inner.bounds.clone()
    }

    fn size(&self, index: Vec<usize>) -> usize {
        self.inner.size(&index)
    }

    fn validate(&self) -> (bool, String) {
        let rep = self.inner.validate();
        (rep.is_pass(), rep.to_string())
    }

    fn diagonal(&self) -> SimplicialSet {
        SimplicialSet {
            inner: self.inner.diagonal(),
        }
    }

    /// Replace a direction (1-based) by the nerve of its fundamental
    /// groupoids.
    #[pyo3(signature = (direction, budget = DEFAULT_BUDGET))]
    fn pi1_nerve(&self, direction: usize, budget: usize) -> PyResult<MultiSimplicialSet> {
        if direction == 0 || direction > self.inner.arity() {
            return Err(PyValueError::new_err("direction out of range"));
        }
        Ok(MultiSimplicialSet {
            inner: nfold_core::fundamental::pi1_direction_nerve(&self.inner, direction - 1, budget)
                .map_err(err)?,
        })
    }

    fn is_n2_fibrant(&self, m_max: usize) -> PyResult<(bool, String)> {
        let rep = is_n2_fibrant(&self.inner, m_max).map_err(err)?;
        Ok((rep.is_pass(), rep.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("MultiSimplicialSet(bounds={:?})", self.inner.bounds)
    }
}

/// A finite groupoid.
#[pyclass]
#[derive(Clone)]
struct Groupoid {
    inner: FiniteGroupoid,
}

#[pymethods]
impl Groupoid {
    #[staticmethod]
    fn cyclic(n: usize) -> Self {
        Groupoid {
            inner: FiniteGroupoid::from_group(&GroupTable::cyclic(n)),
        }
    }

    #[staticmethod]
    fn symmetric(k: usize) -> Self {
        Groupoid {
            inner: FiniteGroupoid::from_group(&GroupTable::symmetric(k)),
        }
    }

    #[staticmethod]
    fn codiscrete_fibers(f: Vec<usize>, base_size: usize) -> Self {
        Groupoid {
            inner: FiniteGroupoid::af_construction(&f, base_size),
        }
    }

    #[staticmethod]
    fn from_json(data: &str) -> PyResult<Self> {
        let j = serde_json::from_str(data).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Groupoid {
            inner: groupoid_from_json(&j).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&groupoid_to_json(&self.inner)).unwrap()
    }

    #[getter]
    fn n_objects(&self) -> usize {
        self.inner.n_objects
    }

    #[getter]
    fn n_morphisms(&self) -> usize {
        self.inner.n_morphisms()
    }

    fn validate(&self) -> (bool, String) {
        let rep = self.inner.validate();
        (rep.is_pass(), rep.to_string())
    }

    fn pi0_count(&self) -> usize {
        self.inner.pi0().1
    }

    fn is_homotopically_discrete(&self) -> bool {
        self.inner.is_homotopically_discrete().0
    }

    fn nerve(&self, bound: usize) -> SimplicialSet {
        SimplicialSet {
            inner: self.inner.nerve(bound),
        }
    }

    fn isomorphic(&self, other: &Groupoid) -> bool {
        groupoid_isomorphic(&self.inner, &other.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Groupoid(objects={}, morphisms={})",
            self.inner.n_objects,
            self.inner.n_morphisms()
        )
    }
}

/// An n-fold groupoid, stored as its 2-truncated multinerve.
#[pyclass(name = "NFoldGroupoid")]
#[derive(Clone)]
struct NFoldGroupoidPy {
    inner: nfold_core::nfold::NFoldGroupoid,
}

#[pymethods]
impl NFoldGroupoidPy {
    #[staticmethod]
    fn from_json(data: &str) -> PyResult<Self> {
        let j = serde_json::from_str(data).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(NFoldGroupoidPy {
            inner: nfold_from_json(&j).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&msset_to_json(&self.inner.core, true)).unwrap()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn size(&self, index: Vec<usize>) -> usize {
        self.inner.core.size(&index)
    }

    #[pyo3(signature = (k_max = 3))]
    fn is_weakly_globular(&self, k_max: usize) -> (bool, String) {
        let rep = self.inner.is_weakly_globular(k_max);
        (rep.is_pass(), rep.to_string())
    }

    fn is_homotopically_discrete(&self) -> (bool, String) {
        let (hd, _, rep) = self.inner.is_hd();
        (hd, rep.to_string())
    }

    fn omega0_size(&self) -> PyResult<usize> {
        Ok(self.inner.omega0().map_err(err)?.0)
    }

    /// Multiplication table of ω_k at a basepoint cell of the zero index.
    #[pyo3(signature = (k, basepoint = 0))]
    fn omega(&self, k: usize, basepoint: usize) -> PyResult<Vec<Vec<usize>>> {
        Ok(self.inner.omega(k, basepoint).map_err(err)?.mul)
    }

    #[pyo3(signature = (k, basepoint = 0))]
    fn omega_order(&self, k: usize, basepoint: usize) -> PyResult<usize> {
        Ok(self.inner.omega(k, basepoint).map_err(err)?.order())
    }

    fn w_arrows(&self, k: usize) -> NFoldGroupoidPy {
        NFoldGroupoidPy {
            inner: self.inner.w_arrows(k),
        }
    }

    fn pi0(&self) -> PyResult<NFoldGroupoidPy> {
        Ok(NFoldGroupoidPy {
            inner: self.inner.pi0_functor().map_err(err)?.quotient,
        })
    }

    /// Higher-groupoid class of the multinerve view.
    #[pyo3(signature = (simplicial_bound = 3))]
    fn classify(&self, simplicial_bound: usize) -> PyResult<String> {
        let view = PseudoNFold::from_nfold(&self.inner, simplicial_bound).map_err(err)?;
        Ok(classify(&view).class.to_string())
    }

    /// Discretize to a Tamsamani weak n-groupoid; returns the class label
    /// of the result and whether every chain arrow is an equivalence.
    #[pyo3(signature = (simplicial_bound = 3))]
    fn discretize(&self, simplicial_bound: usize) -> PyResult<(String, bool)> {
        let view = PseudoNFold::from_nfold(&self.inner, simplicial_bound).map_err(err)?;
        let (d, arrows) = discretize_psg(&view).map_err(err)?;
        let label = classify(&d).class.to_string();
        Ok((label, arrows.iter().all(|a| a.is_equivalence)))
    }

    fn __repr__(&self) -> String {
        format!("NFoldGroupoid(arity={})", self.inner.arity())
    }
}

#[pymodule]
fn nfold_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SimplicialSet>()?;
    m.add_class::<MultiSimplicialSet>()?;
    m.add_class::<Groupoid>()?;
    m.add_class::<NFoldGroupoidPy>()?;
    Ok(())
}
