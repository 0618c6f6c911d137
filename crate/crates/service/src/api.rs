//! Route handlers under `/api/v1`.

use std::sync::Arc;
use std::time::Instant;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use vnarrow::analysis::{annotate_closedness, check_fvp, compare_nodes, query_tree, ComparisonReport, FvpLimits};
use vnarrow::parser::{parse_query, parse_term};
use vnarrow::variant::{ExpandOptions, VariantTree};

use crate::dto::*;
use crate::error::{ApiError, ApiResult};
use crate::session::{AppState, Session, Settings, TreeSlot};

type AppStateRef = State<Arc<AppState>>;

pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/restore", post(restore_session))
        .route("/sessions/:sid", get(session_info).delete(delete_session))
        .route("/sessions/:sid/settings", get(get_settings).put(put_settings))
        .route("/sessions/:sid/snapshot", post(save_snapshot))
        .route("/sessions/:sid/fvp", post(fvp))
        .route("/sessions/:sid/trees", post(open_tree))
        .route("/sessions/:sid/trees/:tid", get(tree_export))
        .route("/sessions/:sid/trees/:tid/auto", post(auto_expand))
        .route("/sessions/:sid/trees/:tid/variants", get(list_variants))
        .route("/sessions/:sid/trees/:tid/compare", post(compare))
        .route("/sessions/:sid/trees/:tid/query", post(query))
        .route("/sessions/:sid/trees/:tid/closedness", post(closedness))
        .route("/sessions/:sid/trees/:tid/export/json", get(tree_export))
        .route("/sessions/:sid/trees/:tid/export/meta", get(export_meta))
        .route("/sessions/:sid/trees/:tid/nodes/:nid", get(node_info))
        .route("/sessions/:sid/trees/:tid/nodes/:nid/expand", post(expand_node));
    Router::new().nest("/api/v1", api).with_state(state)
}

fn session_info_of(s: &Session) -> SessionInfo {
    SessionInfo { session_id: s.id, theory: s.theory.name.clone(), trees: s.tree_ids(), settings: s.settings() }
}

async fn create_session(State(st): AppStateRef, Json(req): Json<CreateSession>) -> ApiResult<impl IntoResponse> {
    let s = st.create_session(req.module)?;
    Ok((StatusCode::CREATED, Json(session_info_of(&s))))
}

async fn list_sessions(State(st): AppStateRef) -> Json<Vec<u64>> {
    Json(st.session_ids())
}

async fn restore_session(State(st): AppStateRef, Json(snap): Json<crate::session::Snapshot>) -> ApiResult<impl IntoResponse> {
    let s = st.restore(snap)?;
    Ok((StatusCode::CREATED, Json(session_info_of(&s))))
}

async fn session_info(State(st): AppStateRef, Path(sid): Path<u64>) -> ApiResult<Json<SessionInfo>> {
    let s = st.session(sid)?;
    Ok(Json(session_info_of(&s)))
}

async fn delete_session(State(st): AppStateRef, Path(sid): Path<u64>) -> ApiResult<StatusCode> {
    st.remove_session(sid)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn get_settings(State(st): AppStateRef, Path(sid): Path<u64>) -> ApiResult<Json<Settings>> {
    Ok(Json(st.session(sid)?.settings()))
}

async fn put_settings(State(st): AppStateRef, Path(sid): Path<u64>, Json(p): Json<SettingsPatch>) -> ApiResult<Json<Settings>> {
    let s = st.session(sid)?;
    let mut settings = s.settings.lock().unwrap();
    p.apply(&mut settings);
    Ok(Json(*settings))
}

async fn save_snapshot(State(st): AppStateRef, Path(sid): Path<u64>) -> ApiResult<Json<SnapshotSaved>> {
    let s = st.session(sid)?;
    let dir = st.config.snapshot_dir.clone().ok_or_else(|| ApiError::BadRequest("no snapshot directory configured".into()))?;
    let snap = s.snapshot().await;
    let text = serde_json::to_string_pretty(&snap).map_err(|e| ApiError::Snapshot(e.to_string()))?;
    tokio::fs::create_dir_all(&dir).await.map_err(|e| ApiError::Snapshot(e.to_string()))?;
    let path = dir.join(format!("session-{sid}.json"));
    tokio::fs::write(&path, text).await.map_err(|e| ApiError::Snapshot(e.to_string()))?;
    Ok(Json(SnapshotSaved { path: path.display().to_string() }))
}

/// Runs engine work off the async runtime.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn open_tree(State(st): AppStateRef, Path(sid): Path<u64>, Json(req): Json<OpenTree>) -> ApiResult<impl IntoResponse> {
    let s = st.session(sid)?;
    let th = Arc::clone(&s.theory);
    let tree = blocking(move || {
        let t = parse_term(&req.term, &th)?;
        Ok(VariantTree::new(th, &t)?)
    })
    .await?;
    let root = NodeInfo::of(&tree, 0, s.settings().view);
    let tree_id = s.add_tree(tree);
    Ok((StatusCode::CREATED, Json(TreeCreated { tree_id, root })))
}

fn locate(st: &AppState, sid: u64, tid: u64) -> ApiResult<(Arc<Session>, TreeSlot)> {
    let s = st.session(sid)?;
    let slot = s.tree(tid)?;
    Ok((s, slot))
}

fn check_node(tree: &VariantTree, nid: usize) -> ApiResult<()> {
    if nid < tree.len() {
        Ok(())
    } else {
        Err(ApiError::NotFound(format!("node {nid}")))
    }
}

async fn tree_export(State(st): AppStateRef, Path((sid, tid)): Path<(u64, u64)>) -> ApiResult<impl IntoResponse> {
    let (_, slot) = locate(&st, sid, tid)?;
    let json = slot.lock().await.export_json();
    Ok(([(header::CONTENT_TYPE, "application/json")], json))
}

async fn export_meta(
    State(st): AppStateRef,
    Path((sid, tid)): Path<(u64, u64)>,
    Query(q): Query<MetaQuery>,
) -> ApiResult<impl IntoResponse> {
    let (_, slot) = locate(&st, sid, tid)?;
    let tree = slot.lock().await;
    if let Some(n) = q.node {
        check_node(&tree, n)?;
    }
    let text = tree.export_meta(q.node)?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text))
}

async fn node_info(State(st): AppStateRef, Path((sid, tid, nid)): Path<(u64, u64, usize)>) -> ApiResult<Json<NodeInfo>> {
    let (s, slot) = locate(&st, sid, tid)?;
    let tree = slot.lock().await;
    check_node(&tree, nid)?;
    Ok(Json(NodeInfo::of(&tree, nid, s.settings().view)))
}

async fn list_variants(State(st): AppStateRef, Path((sid, tid)): Path<(u64, u64)>) -> ApiResult<Json<Vec<VariantInfo>>> {
    let (_, slot) = locate(&st, sid, tid)?;
    let tree = slot.lock().await;
    let out = (0..tree.len())
        .map(|id| {
            let n = tree.export_node(id);
            VariantInfo {
                id,
                term: n.term,
                substitution: n.substitution,
                fresh_index: n.fresh_index,
                parent_id: n.parent_id,
                more_flag: n.more_flag,
            }
        })
        .collect();
    Ok(Json(out))
}

/// Per-node data an expansion can change on existing nodes.
fn marks(tree: &VariantTree) -> Vec<(bool, bool, vnarrow::variant::NodeFlags)> {
    tree.nodes().iter().map(|n| (n.more, n.expanded, n.flags.clone())).collect()
}

fn delta(tree: &VariantTree, before: &[(bool, bool, vnarrow::variant::NodeFlags)], new: &[usize], settings: Settings) -> Delta {
    let view = settings.view;
    let updated = before
        .iter()
        .enumerate()
        .filter(|(i, m)| {
            let n = &tree.nodes()[*i];
            (n.more, n.expanded, &n.flags) != (m.0, m.1, &m.2)
        })
        .map(|(i, _)| NodeInfo::of(tree, i, view))
        .collect();
    let edges = new
        .iter()
        .map(|&id| {
            let n = &tree.nodes()[id];
            EdgeRef { from: n.parent.unwrap_or(0), to: id, equation: n.edge.as_ref().map(|e| e.equation.clone()).unwrap_or_default() }
        })
        .collect();
    Delta { new_nodes: new.iter().map(|&id| NodeInfo::of(tree, id, view)).collect(), edges, updated }
}

fn try_lock(slot: TreeSlot, tid: u64) -> ApiResult<tokio::sync::OwnedMutexGuard<VariantTree>> {
    slot.try_lock_owned().map_err(|_| ApiError::Busy(tid))
}

async fn expand_node(State(st): AppStateRef, Path((sid, tid, nid)): Path<(u64, u64, usize)>) -> ApiResult<Json<Delta>> {
    let (s, slot) = locate(&st, sid, tid)?;
    let mut tree = try_lock(slot, tid)?;
    check_node(&tree, nid)?;
    let settings = s.settings();
    let d = blocking(move || {
        let before = marks(&tree);
        let new = tree.expand_node(nid)?;
        Ok(delta(&tree, &before, &new, settings))
    })
    .await?;
    Ok(Json(d))
}

async fn auto_expand(
    State(st): AppStateRef,
    Path((sid, tid)): Path<(u64, u64)>,
    Json(req): Json<AutoExpand>,
) -> ApiResult<(StatusCode, Json<AutoResult>)> {
    let (s, slot) = locate(&st, sid, tid)?;
    let mut tree = try_lock(slot, tid)?;
    let settings = s.settings();
    let limits = settings.limits;
    let opts = ExpandOptions {
        deadline: Some(Instant::now() + limits.request_timeout()),
        cancel: None,
        max_nodes: Some(limits.max_nodes),
    };
    let res = blocking(move || {
        let before = marks(&tree);
        let report = match req.mode {
            AutoMode::Depth => tree.expand_depth(req.bound.unwrap_or(1), &opts)?,
            AutoMode::Variants => tree.expand_variants(req.bound.unwrap_or(limits.max_variants), &opts)?,
            AutoMode::Embedding => tree.expand_until_whistle(&opts)?,
        };
        let partial = report.criterion == vnarrow::variant::Criterion::Timeout;
        Ok(AutoResult {
            criterion: report.criterion,
            partial,
            size: tree.len(),
            delta: delta(&tree, &before, &report.new_nodes, settings),
            branches: report.branches,
        })
    })
    .await?;
    let status = if res.partial { StatusCode::REQUEST_TIMEOUT } else { StatusCode::OK };
    Ok((status, Json(res)))
}

async fn compare(
    State(st): AppStateRef,
    Path((sid, tid)): Path<(u64, u64)>,
    Json(req): Json<CompareRequest>,
) -> ApiResult<Json<ComparisonReport>> {
    let (_, slot) = locate(&st, sid, tid)?;
    let tree = slot.lock().await;
    check_node(&tree, req.left)?;
    check_node(&tree, req.right)?;
    Ok(Json(compare_nodes(&tree, req.left, req.right)?))
}

async fn query(State(st): AppStateRef, Path((sid, tid)): Path<(u64, u64)>, Json(req): Json<QueryRequest>) -> ApiResult<Json<QueryResult>> {
    let (s, slot) = locate(&st, sid, tid)?;
    let q = parse_query(&req.pattern, &s.theory)?;
    let tree = slot.lock().await;
    Ok(Json(QueryResult { hits: query_tree(&tree, &q)? }))
}

async fn closedness(State(st): AppStateRef, Path((sid, tid)): Path<(u64, u64)>) -> ApiResult<Json<ClosednessResult>> {
    let (_, slot) = locate(&st, sid, tid)?;
    let mut tree = try_lock(slot, tid)?;
    blocking(move || {
        annotate_closedness(&mut tree)?;
        let closed = tree.nodes().iter().map(|n| (n.id, n.flags.closed.unwrap_or(false))).collect();
        Ok(Json(ClosednessResult { closed }))
    })
    .await
}

async fn fvp(State(st): AppStateRef, Path(sid): Path<u64>, body: Option<Json<FvpRequest>>) -> ApiResult<Json<FvpResult>> {
    let s = st.session(sid)?;
    let req = body.map(|Json(b)| b).unwrap_or_default();
    let l = s.settings().limits;
    let limits = FvpLimits {
        max_variants: req.max_variants.unwrap_or(l.max_variants),
        timeout: req.timeout_secs.map_or(l.fvp_timeout(), std::time::Duration::from_secs),
    };
    let th = Arc::clone(&s.theory);
    blocking(move || {
        let v = check_fvp(&th, limits, None)?;
        let operators = v
            .per_operator
            .iter()
            .map(|(op, r)| OperatorVerdict {
                operator: op.clone(),
                flat_term: th.show(&r.flat_term),
                finite: r.verdict.is_finite(),
                variants: r.verdict.count(),
                reason: match &r.verdict {
                    vnarrow::analysis::OpVerdict::Uncertain { reason, .. } => Some(*reason),
                    _ => None,
                },
                line: format!("{op}: {}", r.verdict.summary()),
            })
            .collect();
        Ok(Json(FvpResult { overall: v.overall, operators }))
    })
    .await
}
