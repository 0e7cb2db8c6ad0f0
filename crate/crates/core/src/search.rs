//! Symmetry-reduced exhaustive search for hemisystems.
//!
//! A group acting on an incidence structure splits points and lines into
//! orbits. A union of line orbits meets every point in half its degree iff
//! the 0/1 vector `x` over line orbits solves `B x = target`, where `b_ij`
//! counts the lines of orbit `j` through a point of orbit `i`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{config_err, pre_err, Error, Result};
use crate::group::{orbit_labels, orbits_from_labels};
use crate::incidence::IncidenceStructure;
use crate::knarr::{FlockGq, SemilinearMap};
use crate::typeone::verify_lines;

/// A permutation group given by generators acting on points and lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupAction {
    pub point_gens: Vec<Vec<u32>>,
    pub line_gens: Vec<Vec<u32>>,
}

impl GroupAction {
    pub fn trivial() -> GroupAction {
        GroupAction::default()
    }

    /// Checks that every generator is a pair of permutations preserving
    /// incidence.
    pub fn from_perms(inc: &IncidenceStructure, point_gens: Vec<Vec<u32>>, line_gens: Vec<Vec<u32>>) -> Result<GroupAction> {
        if point_gens.len() != line_gens.len() {
            return Err(config_err!("{} point generators but {} line generators", point_gens.len(), line_gens.len()));
        }
        for (g, (pp, lp)) in point_gens.iter().zip(&line_gens).enumerate() {
            if !is_permutation(pp, inc.num_points()) || !is_permutation(lp, inc.num_lines()) {
                return Err(Error::Verification(format!("generator {g} is not a permutation")));
            }
            for j in 0..inc.num_lines() {
                let mut img: Vec<u32> = inc.points_on(j).iter().map(|&p| pp[p as usize]).collect();
                img.sort_unstable();
                if img != inc.points_on(lp[j] as usize) {
                    return Err(Error::Verification(format!("generator {g} breaks incidence at line {j}")));
                }
            }
        }
        Ok(GroupAction { point_gens, line_gens })
    }

    /// Induced action of semilinear maps on the Knarr model.
    pub fn from_maps(gq: &FlockGq, maps: &[SemilinearMap]) -> Result<GroupAction> {
        let mut act = GroupAction::default();
        for g in maps {
            let p = gq.induced(g)?;
            act.point_gens.push(p.points);
            act.line_gens.push(p.lines);
        }
        Ok(act)
    }

    /// The same group acting on the dual structure.
    pub fn dual(&self) -> GroupAction {
        GroupAction { point_gens: self.line_gens.clone(), line_gens: self.point_gens.clone() }
    }

    /// Point and line orbits, numbered by least member.
    pub fn orbits(&self, inc: &IncidenceStructure) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let pg: Vec<&[u32]> = self.point_gens.iter().map(|g| g.as_slice()).collect();
        let lg: Vec<&[u32]> = self.line_gens.iter().map(|g| g.as_slice()).collect();
        (
            orbits_from_labels(&orbit_labels(inc.num_points(), &pg)),
            orbits_from_labels(&orbit_labels(inc.num_lines(), &lg)),
        )
    }

    /// Whether every generator fixes the line set `lines` (sorted).
    pub fn fixes_lines(&self, lines: &[u32]) -> bool {
        self.line_gens.iter().all(|g| {
            let mut img: Vec<u32> = lines.iter().map(|&l| g[l as usize]).collect();
            img.sort_unstable();
            img == lines
        })
    }
}

fn is_permutation(p: &[u32], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    p.iter().all(|&x| (x as usize) < n && !std::mem::replace(&mut seen[x as usize], true))
}

/// `sum over lines of x <= alpha`, on expanded line indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideConstraint {
    pub lines: Vec<u32>,
    pub alpha: u32,
}

#[derive(Clone, Debug)]
pub struct TacticalSystem {
    inc: IncidenceStructure,
    pub point_orbits: Vec<Vec<u32>>,
    /// Variable `j` stands for the lines of `line_orbits[j]`.
    pub line_orbits: Vec<Vec<u32>>,
    /// Sparse rows of `B`: `(variable, b_ij)` with `b_ij > 0`.
    pub rows: Vec<Vec<(u32, u32)>>,
    pub target: u32,
    pub side: Vec<SideConstraint>,
    /// Variables with a prescribed value.
    pub fixed: Vec<(u32, bool)>,
    line_var: Vec<u32>,
}

/// Builds `B` from orbit representatives, checking every other member of
/// each point orbit gives the same row.
pub fn tactical(inc: &IncidenceStructure, point_orbits: Vec<Vec<u32>>, line_orbits: Vec<Vec<u32>>) -> Result<TacticalSystem> {
    let mut line_var = vec![u32::MAX; inc.num_lines()];
    for (j, o) in line_orbits.iter().enumerate() {
        for &l in o {
            line_var[l as usize] = j as u32;
        }
    }
    if line_var.contains(&u32::MAX) {
        return Err(config_err!("line orbits do not cover every line"));
    }
    let row_of = |p: u32| {
        let mut r: Vec<(u32, u32)> = Vec::new();
        let mut vars: Vec<u32> = inc.lines_through(p as usize).iter().map(|&l| line_var[l as usize]).collect();
        vars.sort_unstable();
        for v in vars {
            match r.last_mut() {
                Some((w, c)) if *w == v => *c += 1,
                _ => r.push((v, 1)),
            }
        }
        r
    };
    let mut rows = Vec::with_capacity(point_orbits.len());
    let mut degree = None;
    for (i, o) in point_orbits.iter().enumerate() {
        let rep = *o.first().ok_or_else(|| config_err!("empty point orbit {i}"))?;
        let r = row_of(rep);
        for &p in &o[1..] {
            if row_of(p) != r {
                return Err(Error::Verification(format!(
                    "points {rep} and {p} of orbit {i} see the line orbits differently"
                )));
            }
        }
        let d: u32 = r.iter().map(|&(_, c)| c).sum();
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => return Err(config_err!("point degrees {e} and {d} differ")),
            _ => {}
        }
        rows.push(r);
    }
    let degree = degree.unwrap_or(0);
    if degree % 2 != 0 {
        return Err(config_err!("point degree {degree} is odd"));
    }
    Ok(TacticalSystem {
        inc: inc.clone(),
        point_orbits,
        line_orbits,
        rows,
        target: degree / 2,
        side: Vec::new(),
        fixed: Vec::new(),
        line_var,
    })
}

impl TacticalSystem {
    pub fn for_group(inc: &IncidenceStructure, group: &GroupAction) -> Result<TacticalSystem> {
        let (po, lo) = group.orbits(inc);
        tactical(inc, po, lo)
    }

    pub fn incidence(&self) -> &IncidenceStructure {
        &self.inc
    }

    pub fn num_vars(&self) -> usize {
        self.line_orbits.len()
    }

    pub fn var_of_line(&self, line: u32) -> u32 {
        self.line_var[line as usize]
    }

    pub fn dense_b(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0; self.num_vars()];
                for &(v, c) in r {
                    d[v as usize] = c;
                }
                d
            })
            .collect()
    }

    /// Expanded, sorted line set of a 0/1 assignment.
    pub fn expand(&self, x: &[bool]) -> Vec<u32> {
        let mut out: Vec<u32> =
            x.iter().enumerate().filter(|(_, &b)| b).flat_map(|(j, _)| self.line_orbits[j].iter().copied()).collect();
        out.sort_unstable();
        out
    }

    /// Requires the orbits of `lines` to be in (`value = true`) or out.
    pub fn fix_lines(&mut self, lines: &[u32], value: bool) -> Result<()> {
        for &l in lines {
            if l as usize >= self.line_var.len() {
                return Err(config_err!("line {l} out of range"));
            }
            let v = self.line_var[l as usize];
            match self.fixed.iter().find(|&&(w, _)| w == v) {
                Some(&(_, b)) if b != value => {
                    return Err(config_err!("line {l} is both prescribed and forbidden"));
                }
                Some(_) => {}
                None => self.fixed.push((v, value)),
            }
        }
        Ok(())
    }

    /// Adds `sum over solution of x <= alpha`.
    pub fn exclude(&mut self, solution: &[u32], alpha: u32) -> Result<()> {
        if alpha as usize >= solution.len() {
            return Err(pre_err!("alpha = {alpha} is not below the solution weight {}", solution.len()));
        }
        let mut lines = solution.to_vec();
        lines.sort_unstable();
        lines.dedup();
        self.side.push(SideConstraint { lines, alpha });
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    #[serde(default)]
    pub max_solutions: Option<u64>,
    #[serde(default)]
    pub max_nodes: Option<u64>,
    #[serde(default)]
    pub time_ms: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    LimitReached,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveResult {
    /// Expanded line sets in search order.
    pub solutions: Vec<Vec<u32>>,
    pub status: Status,
    pub node_count: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

struct Compiled {
    cols: Vec<Vec<(u32, u32)>>,
    rows: Vec<Vec<(u32, u32)>>,
    side_rows: Vec<Vec<(u32, u32)>>,
    side_cols: Vec<Vec<(u32, u32)>>,
    side_max: Vec<i64>,
    alpha: Vec<i64>,
    target: i64,
    obj: Vec<i64>,
}

impl Compiled {
    fn new(sys: &TacticalSystem, obj_lines: Option<&[u32]>) -> Compiled {
        let n = sys.num_vars();
        let mut cols = vec![Vec::new(); n];
        for (i, r) in sys.rows.iter().enumerate() {
            for &(v, c) in r {
                cols[v as usize].push((i as u32, c));
            }
        }
        let weights = |lines: &[u32]| {
            let mut w = vec![0u32; n];
            for &l in lines {
                w[sys.line_var[l as usize] as usize] += 1;
            }
            w
        };
        let mut side_rows = Vec::new();
        let mut side_cols = vec![Vec::new(); n];
        let mut side_max = Vec::new();
        let mut alpha = Vec::new();
        for (k, s) in sys.side.iter().enumerate() {
            let w = weights(&s.lines);
            let row: Vec<(u32, u32)> =
                w.iter().enumerate().filter(|(_, &c)| c > 0).map(|(v, &c)| (v as u32, c)).collect();
            for &(v, c) in &row {
                side_cols[v as usize].push((k as u32, c));
            }
            side_max.push(row.iter().map(|&(_, c)| c as i64).max().unwrap_or(0));
            side_rows.push(row);
            alpha.push(s.alpha as i64);
        }
        let obj = obj_lines.map(|l| weights(l).into_iter().map(i64::from).collect()).unwrap_or_else(|| vec![0; n]);
        Compiled {
            cols,
            rows: sys.rows.clone(),
            side_rows,
            side_cols,
            side_max,
            alpha,
            target: sys.target as i64,
            obj,
        }
    }
}

#[derive(Clone)]
struct State {
    val: Vec<i8>,
    demand: Vec<i64>,
    supply: Vec<i64>,
    open: Vec<u32>,
    slack: Vec<i64>,
    obj_cur: i64,
    obj_open: i64,
    trail: Vec<u32>,
}

impl State {
    fn new(c: &Compiled) -> State {
        State {
            val: vec![-1; c.cols.len()],
            demand: vec![c.target; c.rows.len()],
            supply: c.rows.iter().map(|r| r.iter().map(|&(_, x)| x as i64).sum()).collect(),
            open: c.rows.iter().map(|r| r.len() as u32).collect(),
            slack: c.alpha.clone(),
            obj_cur: 0,
            obj_open: c.obj.iter().sum(),
            trail: Vec::new(),
        }
    }

    /// Records `x_v = b`; false if some row or side constraint is violated.
    fn assign(&mut self, c: &Compiled, v: u32, b: bool) -> bool {
        let vi = v as usize;
        self.val[vi] = b as i8;
        self.trail.push(v);
        let mut ok = true;
        for &(r, x) in &c.cols[vi] {
            let r = r as usize;
            self.supply[r] -= x as i64;
            self.open[r] -= 1;
            if b {
                self.demand[r] -= x as i64;
            }
            ok &= self.demand[r] >= 0 && self.demand[r] <= self.supply[r];
        }
        if b {
            for &(k, w) in &c.side_cols[vi] {
                self.slack[k as usize] -= w as i64;
                ok &= self.slack[k as usize] >= 0;
            }
            self.obj_cur += c.obj[vi];
        }
        self.obj_open -= c.obj[vi];
        ok
    }

    fn undo(&mut self, c: &Compiled, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap() as usize;
            let b = self.val[v] == 1;
            self.val[v] = -1;
            for &(r, x) in &c.cols[v] {
                let r = r as usize;
                self.supply[r] += x as i64;
                self.open[r] += 1;
                if b {
                    self.demand[r] += x as i64;
                }
            }
            if b {
                for &(k, w) in &c.side_cols[v] {
                    self.slack[k as usize] += w as i64;
                }
                self.obj_cur -= c.obj[v];
            }
            self.obj_open += c.obj[v];
        }
    }

    /// Forces assignments implied by trail entries from `from` on.
    fn propagate(&mut self, c: &Compiled, from: usize) -> bool {
        let mut i = from;
        while i < self.trail.len() {
            let v = self.trail[i] as usize;
            i += 1;
            for &(r, _) in &c.cols[v] {
                if !self.force_row(c, r as usize) {
                    return false;
                }
            }
            if self.val[v] == 1 {
                for &(k, _) in &c.side_cols[v] {
                    if !self.force_side(c, k as usize) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn force_row(&mut self, c: &Compiled, r: usize) -> bool {
        if self.open[r] == 0 {
            return self.demand[r] == 0;
        }
        for &(v, x) in &c.rows[r] {
            if self.val[v as usize] != -1 {
                continue;
            }
            let (d, s, x) = (self.demand[r], self.supply[r], x as i64);
            if x > d {
                if !self.assign(c, v, false) {
                    return false;
                }
            } else if s - x < d && !self.assign(c, v, true) {
                return false;
            }
        }
        self.demand[r] >= 0 && self.demand[r] <= self.supply[r]
    }

    fn force_side(&mut self, c: &Compiled, k: usize) -> bool {
        if self.slack[k] >= c.side_max[k] {
            return true;
        }
        for &(v, w) in &c.side_rows[k] {
            if self.val[v as usize] == -1 && w as i64 > self.slack[k] && !self.assign(c, v, false) {
                return false;
            }
        }
        true
    }

    /// Most-constrained open row, then its largest-coefficient open
    /// variable; ties by lowest index.
    fn branch_var(&self, c: &Compiled) -> Option<u32> {
        let mut best: Option<(u32, usize)> = None;
        for (r, &o) in self.open.iter().enumerate() {
            if o > 0 && best.is_none_or(|(bo, _)| o < bo) {
                best = Some((o, r));
                if o == 1 {
                    break;
                }
            }
        }
        let (_, r) = match best {
            Some(b) => b,
            None => return self.val.iter().position(|&x| x == -1).map(|v| v as u32),
        };
        let mut pick: Option<(u32, u32)> = None;
        for &(v, x) in &c.rows[r] {
            if self.val[v as usize] == -1 && pick.is_none_or(|(_, px)| x > px) {
                pick = Some((v, x));
            }
        }
        pick.map(|(v, _)| v)
    }
}

enum Flow {
    Continue,
    Stop,
}

struct Search<'a> {
    c: &'a Compiled,
    limits: Limits,
    start: Instant,
    nodes: u64,
    found: Vec<Vec<bool>>,
    limited: bool,
    /// Maximize the objective instead of enumerating.
    optimize: bool,
    best: i64,
}

impl<'a> Search<'a> {
    fn new(c: &'a Compiled, limits: Limits, optimize: bool) -> Search<'a> {
        Search { c, limits, start: Instant::now(), nodes: 0, found: Vec::new(), limited: false, optimize, best: -1 }
    }

    fn over_limit(&mut self) -> bool {
        if self.limits.max_nodes.is_some_and(|m| self.nodes > m)
            || (self.nodes.is_multiple_of(1024)
                && self.limits.time_ms.is_some_and(|t| self.start.elapsed() > Duration::from_millis(t)))
        {
            self.limited = true;
        }
        self.limited
    }

    fn dfs(&mut self, st: &mut State) -> Flow {
        self.nodes += 1;
        if self.over_limit() {
            return Flow::Stop;
        }
        if self.optimize && st.obj_cur + st.obj_open <= self.best {
            return Flow::Continue;
        }
        let Some(v) = st.branch_var(self.c) else {
            let x: Vec<bool> = st.val.iter().map(|&b| b == 1).collect();
            if self.optimize {
                self.best = st.obj_cur;
                self.found = vec![x];
                return Flow::Continue;
            }
            self.found.push(x);
            if self.limits.max_solutions.is_some_and(|m| self.found.len() as u64 >= m) {
                self.limited = true;
                return Flow::Stop;
            }
            return Flow::Continue;
        };
        for b in [true, false] {
            let mark = st.trail.len();
            if st.assign(self.c, v, b) && st.propagate(self.c, mark) {
                if let Flow::Stop = self.dfs(st) {
                    st.undo(self.c, mark);
                    return Flow::Stop;
                }
            }
            st.undo(self.c, mark);
        }
        Flow::Continue
    }

    /// Decision paths of the open nodes at `depth`, in search order.
    fn frontier(&mut self, st: &mut State, depth: usize, path: &mut Vec<(u32, bool)>, out: &mut Vec<Vec<(u32, bool)>>) {
        if depth == 0 {
            out.push(path.clone());
            return;
        }
        self.nodes += 1;
        let Some(v) = st.branch_var(self.c) else {
            self.found.push(st.val.iter().map(|&b| b == 1).collect());
            out.push(Vec::new()); // placeholder keeping solution order
            return;
        };
        for b in [true, false] {
            let mark = st.trail.len();
            if st.assign(self.c, v, b) && st.propagate(self.c, mark) {
                path.push((v, b));
                self.frontier(st, depth - 1, path, out);
                path.pop();
            }
            st.undo(self.c, mark);
        }
    }
}

fn root_state(c: &Compiled, sys: &TacticalSystem) -> Option<State> {
    let mut st = State::new(c);
    let mut ok = true;
    for &(v, b) in &sys.fixed {
        match st.val[v as usize] {
            -1 => ok &= st.assign(c, v, b),
            x => ok &= (x == 1) == b,
        }
    }
    ok &= st.propagate(c, 0);
    for r in 0..c.rows.len() {
        ok &= st.force_row(c, r);
    }
    for k in 0..c.side_rows.len() {
        ok &= st.force_side(c, k);
    }
    ok &= st.propagate(c, 0);
    ok.then_some(st)
}

/// Enumerates every solution of the system in a fixed order.
pub fn solve_all(sys: &TacticalSystem, limits: &Limits) -> SolveResult {
    solve_all_threads(sys, limits, 1)
}

/// As [`solve_all`], splitting the tree over `threads` workers when no
/// solution or node limit is set. Output does not depend on `threads`.
pub fn solve_all_threads(sys: &TacticalSystem, limits: &Limits, threads: usize) -> SolveResult {
    let start = Instant::now();
    let c = Compiled::new(sys, None);
    let Some(mut st) = root_state(&c, sys) else {
        return SolveResult { solutions: Vec::new(), status: Status::Complete, node_count: 1, wall_time: start.elapsed() };
    };
    let parallel = threads > 1 && limits.max_solutions.is_none() && limits.max_nodes.is_none();
    let (found, nodes, limited) = if parallel {
        solve_parallel(&c, &mut st, limits, threads)
    } else {
        let mut s = Search::new(&c, limits.clone(), false);
        s.dfs(&mut st);
        (s.found, s.nodes, s.limited)
    };
    SolveResult {
        solutions: found.iter().map(|x| sys.expand(x)).collect(),
        status: if limited { Status::LimitReached } else { Status::Complete },
        node_count: nodes,
        wall_time: start.elapsed(),
    }
}

fn solve_parallel(c: &Compiled, st: &mut State, limits: &Limits, threads: usize) -> (Vec<Vec<bool>>, u64, bool) {
    use rayon::prelude::*;
    let depth = (usize::BITS - (4 * threads).leading_zeros()) as usize + 2;
    let mut head = Search::new(c, limits.clone(), false);
    let mut paths = Vec::new();
    head.frontier(st, depth, &mut Vec::new(), &mut paths);
    let mut early = head.found.into_iter();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    let results: Vec<Option<(Vec<Vec<bool>>, u64, bool)>> = pool.install(|| {
        paths
            .par_iter()
            .map(|path| {
                if path.is_empty() {
                    return None;
                }
                let mut s = st.clone();
                for &(v, b) in path {
                    let mark = s.trail.len();
                    s.assign(c, v, b);
                    s.propagate(c, mark);
                }
                let mut w = Search::new(c, limits.clone(), false);
                w.dfs(&mut s);
                Some((w.found, w.nodes, w.limited))
            })
            .collect()
    });
    let mut found = Vec::new();
    let mut nodes = head.nodes;
    let mut limited = false;
    for r in results {
        match r {
            None => found.extend(early.next()),
            Some((f, n, l)) => {
                found.extend(f);
                nodes += n;
                limited |= l;
            }
        }
    }
    (found, nodes, limited)
}

/// Solves and rechecks every solution against the full incidence.
pub fn solve_verified(sys: &TacticalSystem, limits: &Limits, threads: usize) -> Result<SolveResult> {
    let r = solve_all_threads(sys, limits, threads);
    for s in &r.solutions {
        let rep = verify_lines(sys.incidence(), s);
        if !rep.passed {
            return Err(Error::Verification(format!("solver output fails at points {:?}", rep.violations)));
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxIntersection {
    /// Best value found; `None` if nothing else is feasible.
    pub value: Option<u32>,
    pub exact: bool,
    pub witness: Option<Vec<u32>>,
    pub node_count: u64,
}

/// Largest intersection of a solution other than `reference` with it.
pub fn max_intersection(sys: &TacticalSystem, reference: &[u32], limits: &Limits) -> Result<MaxIntersection> {
    let rep = verify_lines(sys.incidence(), reference);
    if !rep.passed {
        return Err(pre_err!("reference is not a hemisystem"));
    }
    let mut sys = sys.clone();
    sys.exclude(reference, reference.len() as u32 - 1)?;
    let c = Compiled::new(&sys, Some(reference));
    let Some(mut st) = root_state(&c, &sys) else {
        return Ok(MaxIntersection { value: None, exact: true, witness: None, node_count: 1 });
    };
    let mut s = Search::new(&c, Limits { max_solutions: None, ..limits.clone() }, true);
    s.dfs(&mut st);
    let witness = s.found.first().map(|x| sys.expand(x));
    Ok(MaxIntersection {
        value: (s.best >= 0).then_some(s.best as u32),
        exact: !s.limited,
        witness,
        node_count: s.nodes,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Essential,
    Inessential,
    Unknown,
}

/// For each line orbit: is every solution containing `fixed` forced to
/// meet it? Orbits containing a fixed line are skipped as essential.
pub fn essential_orbits(
    sys: &TacticalSystem,
    fixed: &[u32],
    orbits: &[Vec<u32>],
    limits: &Limits,
) -> Result<Vec<Verdict>> {
    let probe_limits = Limits { max_solutions: Some(1), ..limits.clone() };
    let mut base = sys.clone();
    base.fix_lines(fixed, true)?;
    let r = solve_all(&base, &probe_limits);
    if r.solutions.is_empty() {
        return Err(pre_err!("no solution contains the fixed lines"));
    }
    let mut out = Vec::with_capacity(orbits.len());
    for o in orbits {
        if o.iter().any(|l| fixed.contains(l)) {
            out.push(Verdict::Essential);
            continue;
        }
        let mut s = base.clone();
        if s.fix_lines(o, false).is_err() {
            out.push(Verdict::Essential);
            continue;
        }
        let r = solve_all(&s, &probe_limits);
        out.push(if !r.solutions.is_empty() {
            Verdict::Inessential
        } else if r.status == Status::Complete {
            Verdict::Essential
        } else {
            Verdict::Unknown
        });
    }
    Ok(out)
}

/// The system in CPLEX LP text form.
pub fn export_lp(sys: &TacticalSystem) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let term_list = |terms: &[(u32, u32)]| {
        let mut t = String::new();
        for (i, &(v, c)) in terms.iter().enumerate() {
            let _ = write!(t, "{}{} x{}", if i == 0 { "" } else { " + " }, c, v);
        }
        t
    };
    s.push_str("\\ hemisystem tactical system\n");
    let _ = writeln!(s, "\\ vars {} rows {} target {}", sys.num_vars(), sys.rows.len(), sys.target);
    s.push_str("Minimize\n obj: 0 x0\nSubject To\n");
    for (i, r) in sys.rows.iter().enumerate() {
        let _ = writeln!(s, " p{i}: {} = {}", term_list(r), sys.target);
    }
    let c = Compiled::new(sys, None);
    for (k, row) in c.side_rows.iter().enumerate() {
        let _ = writeln!(s, " s{k}: {} <= {}", term_list(row), c.alpha[k]);
    }
    if !sys.fixed.is_empty() {
        let mut fixed = sys.fixed.clone();
        fixed.sort_unstable();
        s.push_str("Bounds\n");
        for (v, b) in fixed {
            let _ = writeln!(s, " x{v} = {}", b as u8);
        }
    }
    s.push_str("Binary\n");
    for v in 0..sys.num_vars() {
        let _ = writeln!(s, " x{v}");
    }
    s.push_str("End\n");
    s
}

fn default_schema() -> String {
    "qf/1".into()
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(default)]
    pub generators: Vec<crate::knarr::SemilinearWire>,
    /// `"singer"` adds the Singer-type element and `u -> u^(q^2)`
    /// (Q^-(5,q) model only).
    #[serde(default)]
    pub builtin: Option<String>,
}

/// A search run: a model, a group, constraints and limits.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunDescriptor {
    #[serde(default = "default_schema")]
    pub schema: String,
    /// Line-hemisystems of a flock quadrangle.
    #[serde(default)]
    pub gq: Option<crate::knarr::GqDescriptor>,
    /// Point-hemisystems of Q^-(5,q).
    #[serde(default)]
    pub singer_q: Option<u32>,
    #[serde(default)]
    pub group: GroupSpec,
    #[serde(default)]
    pub prescribe: Vec<u32>,
    #[serde(default)]
    pub forbid: Vec<u32>,
    #[serde(default)]
    pub exclude: Vec<SideConstraint>,
    #[serde(default)]
    pub limits: Limits,
}

impl RunDescriptor {
    /// Builds the model and the constrained system.
    pub fn system(&self) -> Result<TacticalSystem> {
        if self.schema != "qf/1" {
            return Err(config_err!("unknown schema {:?}", self.schema));
        }
        let mut sys = match (&self.gq, self.singer_q) {
            (Some(d), None) => {
                let gq = FlockGq::from_json(&serde_json::to_value(d)?)?;
                if self.group.builtin.is_some() {
                    return Err(config_err!("builtin groups apply to the Q^-(5,q) model only"));
                }
                let maps = self
                    .group
                    .generators
                    .iter()
                    .map(|w| SemilinearMap::from_wire(gq.field(), w))
                    .collect::<Result<Vec<_>>>()?;
                TacticalSystem::for_group(gq.incidence(), &GroupAction::from_maps(&gq, &maps)?)?
            }
            (None, Some(q)) => {
                let fr = crate::singer::SingerFrame::new(q)?;
                let mut maps: Vec<crate::linspaces::Matrix> = Vec::new();
                match self.group.builtin.as_deref() {
                    None => {}
                    Some("singer") => {
                        maps.push(fr.mult_matrix(fr.omega()));
                        maps.push(fr.tau_matrix());
                    }
                    Some(b) => return Err(config_err!("unknown builtin group {b:?}")),
                }
                for w in &self.group.generators {
                    let m = SemilinearMap::from_wire(fr.field(), w)?;
                    if m.frob != 0 {
                        return Err(config_err!("Q^-(5,q) generators must be GF(q)-linear"));
                    }
                    maps.push(m.matrix);
                }
                let inc = fr.geometry.incidence.dual();
                let mut pg = Vec::new();
                let mut lg = Vec::new();
                for m in &maps {
                    pg.push(fr.line_perm(m)?);
                    lg.push(fr.point_perm(m)?);
                }
                TacticalSystem::for_group(&inc, &GroupAction::from_perms(&inc, pg, lg)?)?
            }
            _ => return Err(config_err!("exactly one of \"gq\" and \"singer_q\" must be given")),
        };
        sys.fix_lines(&self.prescribe, true)?;
        sys.fix_lines(&self.forbid, false)?;
        for e in &self.exclude {
            sys.exclude(&e.lines, e.alpha)?;
        }
        Ok(sys)
    }
}
