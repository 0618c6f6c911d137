//! In-memory sessions, their trees, and JSON snapshots.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use vnarrow::variant::{TreeExport, VariantTree};
use vnarrow::{parse_module, Theory};

use crate::config::{Config, Limits};
use crate::error::{ApiError, ApiResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    #[default]
    Standard,
    /// Node info includes the normalization trace.
    Instrumented,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Settings {
    pub view: View,
    #[serde(flatten)]
    pub limits: Limits,
}

/// A tree behind its own lock, so requests on one tree are serialized.
pub type TreeSlot = Arc<tokio::sync::Mutex<VariantTree>>;

pub struct Session {
    pub id: u64,
    pub module: String,
    pub theory: Arc<Theory>,
    pub settings: Mutex<Settings>,
    trees: Mutex<BTreeMap<u64, TreeSlot>>,
    next_tree: AtomicU64,
}

impl Session {
    fn new(id: u64, module: String, settings: Settings) -> ApiResult<Self> {
        let theory = Arc::new(parse_module(&module)?);
        Ok(Session { id, module, theory, settings: Mutex::new(settings), trees: Mutex::default(), next_tree: AtomicU64::new(1) })
    }

    pub fn settings(&self) -> Settings {
        *self.settings.lock().unwrap()
    }

    pub fn add_tree(&self, tree: VariantTree) -> u64 {
        let id = self.next_tree.fetch_add(1, Ordering::SeqCst);
        self.trees.lock().unwrap().insert(id, Arc::new(tokio::sync::Mutex::new(tree)));
        id
    }

    pub fn tree(&self, id: u64) -> ApiResult<TreeSlot> {
        self.trees.lock().unwrap().get(&id).cloned().ok_or_else(|| ApiError::NotFound(format!("tree {id}")))
    }

    pub fn tree_ids(&self) -> Vec<u64> {
        self.trees.lock().unwrap().keys().copied().collect()
    }

    pub async fn snapshot(&self) -> Snapshot {
        let slots: Vec<(u64, TreeSlot)> = self.trees.lock().unwrap().iter().map(|(k, v)| (*k, Arc::clone(v))).collect();
        let mut trees = Vec::new();
        for (id, slot) in slots {
            trees.push(TreeSnapshot { id, export: slot.lock().await.to_export() });
        }
        Snapshot { module: self.module.clone(), settings: self.settings(), trees }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSnapshot {
    pub id: u64,
    pub export: TreeExport,
}

/// Everything needed to rebuild a session.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub module: String,
    pub settings: Settings,
    pub trees: Vec<TreeSnapshot>,
}

pub struct AppState {
    pub config: Config,
    sessions: Mutex<BTreeMap<u64, Arc<Session>>>,
    next_session: AtomicU64,
}

impl AppState {
    pub fn new(config: Config) -> Self {
        AppState { config, sessions: Mutex::default(), next_session: AtomicU64::new(1) }
    }

    pub fn create_session(&self, module: String) -> ApiResult<Arc<Session>> {
        let settings = Settings { view: View::Standard, limits: self.config.limits };
        let id = self.next_session.fetch_add(1, Ordering::SeqCst);
        let session = Arc::new(Session::new(id, module, settings)?);
        self.sessions.lock().unwrap().insert(id, Arc::clone(&session));
        Ok(session)
    }

    pub fn restore(&self, snap: Snapshot) -> ApiResult<Arc<Session>> {
        let id = self.next_session.fetch_add(1, Ordering::SeqCst);
        let session = Session::new(id, snap.module, snap.settings)?;
        let mut max = 0;
        for t in snap.trees {
            let tree = VariantTree::from_export(Arc::clone(&session.theory), &t.export)?;
            session.trees.lock().unwrap().insert(t.id, Arc::new(tokio::sync::Mutex::new(tree)));
            max = max.max(t.id);
        }
        session.next_tree.store(max + 1, Ordering::SeqCst);
        let session = Arc::new(session);
        self.sessions.lock().unwrap().insert(id, Arc::clone(&session));
        Ok(session)
    }

    pub fn session(&self, id: u64) -> ApiResult<Arc<Session>> {
        self.sessions.lock().unwrap().get(&id).cloned().ok_or_else(|| ApiError::NotFound(format!("session {id}")))
    }

    pub fn remove_session(&self, id: u64) -> ApiResult<()> {
        self.sessions.lock().unwrap().remove(&id).map(|_| ()).ok_or_else(|| ApiError::NotFound(format!("session {id}")))
    }

    pub fn session_ids(&self) -> Vec<u64> {
        self.sessions.lock().unwrap().keys().copied().collect()
    }
}
