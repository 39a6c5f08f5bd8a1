//! Sessions: a matroid, the searches run on it and the accumulated result
//! store, with a versioned JSON file format and report builders.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{ElementSet, Matroid, MatroidError, MatroidJson};
use crate::multicomplex::{find_pure_labeling, LabelingOutcome, MulticomplexError};
use crate::poset::{build_poset, check_structure, poset_isomorphic, PosetError, RestrictionPoset, StructureReport};
use crate::polytope::{characteristic_vector, Functional, PolytopeError, Rational, RationalJson};
use crate::sweep::{run_search, ResultStore, SearchParams, StoredSweep, Sweep, SweepError, SweepJson};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("cannot read or write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed session file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("corrupted session: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Multicomplex(#[from] MulticomplexError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub vfav: Vec<usize>,
    #[serde(default)]
    pub pivots: Vec<usize>,
    pub limit: usize,
    pub misses: usize,
    pub w: RationalJson,
    pub seed: u64,
    #[serde(default)]
    pub initial: Option<Vec<RationalJson>>,
    #[serde(default)]
    pub perturb_ties: bool,
}

impl ParamsJson {
    pub fn from_params(p: &SearchParams) -> Self {
        ParamsJson {
            vfav: p.vfav.to_vec(),
            pivots: p.pivots.clone(),
            limit: p.limit,
            misses: p.misses,
            w: RationalJson::from(&p.w),
            seed: p.seed,
            initial: p.initial.as_ref().map(Functional::to_json),
            perturb_ties: p.perturb_ties,
        }
    }

    pub fn to_params(&self, m: &Matroid) -> Result<SearchParams, SessionError> {
        Ok(SearchParams {
            vfav: ElementSet::try_from_elements(&self.vfav, m.ground_size())?,
            pivots: self.pivots.clone(),
            limit: self.limit,
            misses: self.misses,
            w: Rational::try_from(&self.w)?,
            seed: self.seed,
            initial: self.initial.as_deref().map(Functional::from_json).transpose()?,
            perturb_ties: self.perturb_ties,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredSweepJson {
    #[serde(flatten)]
    pub sweep: SweepJson,
    pub ip_sets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionFile {
    pub schema: u32,
    pub matroid: MatroidJson,
    pub seed: Option<u64>,
    pub history: Vec<ParamsJson>,
    pub sweeps: Vec<StoredSweepJson>,
}

/// A matroid with its search history and result store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub matroid: Matroid,
    pub history: Vec<SearchParams>,
    pub store: ResultStore,
}

impl Session {
    pub fn new(matroid: Matroid) -> Self {
        Session {
            matroid,
            history: Vec::new(),
            store: ResultStore::new(),
        }
    }

    /// Seed of the first search.
    pub fn seed(&self) -> Option<u64> {
        self.history.first().map(|p| p.seed)
    }

    /// Runs a search into an empty store, replacing the current one.
    pub fn search(&mut self, params: SearchParams) -> Result<usize, SessionError> {
        self.store = run_search(&self.matroid, &params, ResultStore::new())?;
        self.history = vec![params];
        Ok(self.store.len())
    }

    /// Runs a search and merges it into the store; returns the number of
    /// new sweeps. Stored sweeps are never removed.
    pub fn update(&mut self, params: SearchParams) -> Result<usize, SessionError> {
        let before = self.store.len();
        self.store = run_search(&self.matroid, &params, std::mem::take(&mut self.store))?;
        self.history.push(params);
        Ok(self.store.len() - before)
    }

    pub fn to_file(&self) -> SessionFile {
        SessionFile {
            schema: SCHEMA_VERSION,
            matroid: self.matroid.to_json(),
            seed: self.seed(),
            history: self.history.iter().map(ParamsJson::from_params).collect(),
            sweeps: self
                .store
                .sweeps()
                .iter()
                .map(|s| StoredSweepJson {
                    sweep: s.sweep.to_json(&self.matroid),
                    ip_sets: s.restriction.sets.iter().map(|r| r.to_vec()).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a session, recomputing every region and restriction set and
    /// checking them against the stored values.
    pub fn from_file(file: &SessionFile) -> Result<Self, SessionError> {
        if file.schema != SCHEMA_VERSION {
            return Err(SessionError::Schema(file.schema));
        }
        let matroid = Matroid::from_json(&file.matroid)?;
        let history = file
            .history
            .iter()
            .map(|p| p.to_params(&matroid))
            .collect::<Result<Vec<_>, _>>()?;
        let mut store = ResultStore::new();
        for (id, s) in file.sweeps.iter().enumerate() {
            let sweep = Sweep::from_json(&matroid, &s.sweep)
                .map_err(|e| SessionError::Corrupt(format!("sweep {id}: {e}")))?;
            if !store.insert(&matroid, sweep)? {
                return Err(SessionError::Corrupt(format!("sweep {id} is stored twice")));
            }
            let stored = store.sweeps().last().expect("just inserted");
            let ip: Vec<Vec<usize>> = stored.restriction.sets.iter().map(|r| r.to_vec()).collect();
            if ip != s.ip_sets {
                return Err(SessionError::Corrupt(format!("sweep {id}: IP sets differ from the witnesses")));
            }
        }
        Ok(Session {
            matroid,
            history,
            store,
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_file()).expect("session serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, SessionError> {
        Session::from_file(&serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), SessionError> {
        fs::write(path, self.to_json()).map_err(|source| SessionError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, SessionError> {
        let text = fs::read_to_string(path).map_err(|source| SessionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Session::from_json(&text)
    }

    /// Distinct restriction-set families with the sweeps producing them.
    pub fn posets(&self) -> Result<Vec<PosetEntry>, SessionError> {
        let families = self.store.distinct_families();
        let mut entries: Vec<PosetEntry> = Vec::with_capacity(families.len());
        for (id, sweeps) in families.into_iter().enumerate() {
            let poset = build_poset(&self.store.sweeps()[sweeps[0]].restriction)?;
            let mut class = id;
            for e in &entries {
                if poset_isomorphic(&poset, &e.poset).unwrap_or(false) {
                    class = e.class;
                    break;
                }
            }
            entries.push(PosetEntry {
                id,
                class,
                sweeps,
                poset,
            });
        }
        Ok(entries)
    }

    pub fn analyze(&self) -> Result<Vec<PosetAnalysis>, SessionError> {
        self.posets()?
            .into_iter()
            .map(|e| {
                Ok(PosetAnalysis {
                    id: e.id,
                    class: e.class,
                    sweeps: e.sweeps,
                    structure: check_structure(&e.poset),
                    labeling: find_pure_labeling(&e.poset)?,
                })
            })
            .collect()
    }
}

/// A distinct poset in the store. Posets in the same isomorphism class
/// share `class`, the id of the first of them.
#[derive(Debug, Clone)]
pub struct PosetEntry {
    pub id: usize,
    pub class: usize,
    pub sweeps: Vec<usize>,
    pub poset: RestrictionPoset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetAnalysis {
    pub id: usize,
    pub class: usize,
    pub sweeps: Vec<usize>,
    pub structure: StructureReport,
    pub labeling: LabelingOutcome,
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub vertex: String,
    pub position: usize,
    pub ip_set: String,
    pub functional: String,
    pub functional_exact: Vec<RationalJson>,
}

impl TableRow {
    pub fn render(&self) -> String {
        format!("{} | {} | {} | {}", self.vertex, self.position, self.ip_set, self.functional)
    }
}

pub fn sweep_table(m: &Matroid, stored: &StoredSweep) -> Vec<TableRow> {
    stored
        .sweep
        .order()
        .as_slice()
        .iter()
        .zip(stored.sweep.witnesses())
        .zip(&stored.restriction.sets)
        .enumerate()
        .map(|(position, ((&b, l), r))| {
            let chi: Vec<String> = characteristic_vector(m.basis(b), m.ground_size())
                .iter()
                .map(u8::to_string)
                .collect();
            TableRow {
                vertex: format!("({})", chi.join(", ")),
                position,
                ip_set: r.to_string(),
                functional: l.display_sig3(),
                functional_exact: l.to_json(),
            }
        })
        .collect()
}

pub const TABLE_HEADER: &str = "vertex | order swept | IP set | linear functional";

/// The table followed by the exact witnesses of each segment.
pub fn render_sweep(m: &Matroid, id: usize, stored: &StoredSweep) -> String {
    let mut out = format!(
        "sweep {id}: base {} region {}\n{TABLE_HEADER}\n",
        m.basis(stored.sweep.base_vertex()),
        &stored.region_hash[..16]
    );
    for row in sweep_table(m, stored) {
        out.push_str(&row.render());
        out.push('\n');
    }
    for (start, l) in stored.sweep.segments() {
        out.push_str(&format!("witness from position {start}: {l}\n"));
    }
    out
}
