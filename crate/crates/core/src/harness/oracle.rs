//! Slow, direct reference implementations used to cross-check the main
//! algorithms on small inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{generate_synthetic, HarnessError, SyntheticSpec};
use crate::cluster::{
    dbscan, hierarchical, kmeans_traced, kmedoids_traced, leader, Clustering, KMeansParams, KMedoidsParams, Label,
    Linkage,
};
use crate::dataset::{distance, squared_distance, Dataset};
use crate::validity::{
    c_index, davies_bouldin, dunn, fowlkes_mallows, jaccard_index, pair_counts, rand_index, silhouette, IndexError,
    PairCounts, ReferenceLabels,
};

fn d(data: &Dataset, i: usize, j: usize) -> f64 {
    distance(data.row(i), data.row(j)).expect("same dataset")
}

fn d2(data: &Dataset, i: usize, j: usize) -> f64 {
    squared_distance(data.row(i), data.row(j)).expect("same dataset")
}

fn same_cluster(labels: &[Label], i: usize, j: usize) -> bool {
    matches!((labels[i], labels[j]), (Label::Cluster(a), Label::Cluster(b)) if a == b)
}

/// Pair counts by visiting every pair. Noise points share a cluster with
/// nobody.
pub fn pair_counts_brute(labels: &ReferenceLabels, clustering: &Clustering) -> PairCounts {
    let classes = labels.classes();
    let assigned = clustering.labels();
    let mut pc = PairCounts::default();
    for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            match (classes[i] == classes[j], same_cluster(assigned, i, j)) {
                (true, true) => pc.a += 1,
                (true, false) => pc.b += 1,
                (false, true) => pc.c += 1,
                (false, false) => pc.d += 1,
            }
        }
    }
    pc
}

/// Rand, Jaccard and Fowlkes-Mallows from explicit sets of co-clustered
/// pairs rather than from counts.
pub fn external_brute(labels: &ReferenceLabels, clustering: &Clustering) -> [Option<f64>; 3] {
    let classes = labels.classes();
    let assigned = clustering.labels();
    let m = classes.len();
    let mut same_class = Vec::new();
    let mut same_clust = Vec::new();
    let mut agree = 0usize;
    let mut total = 0usize;
    for i in 0..m {
        for j in (i + 1)..m {
            let (sc, sk) = (classes[i] == classes[j], same_cluster(assigned, i, j));
            if sc {
                same_class.push((i, j));
            }
            if sk {
                same_clust.push((i, j));
            }
            agree += usize::from(sc == sk);
            total += 1;
        }
    }
    let both = same_class.iter().filter(|p| same_clust.contains(p)).count();
    let union = same_class.len() + same_clust.len() - both;
    let rand = (total > 0).then(|| agree as f64 / total as f64);
    let jaccard = (union > 0).then(|| both as f64 / union as f64);
    let fm = (!same_class.is_empty() && !same_clust.is_empty())
        .then(|| both as f64 / ((same_class.len() * same_clust.len()) as f64).sqrt());
    [rand, jaccard, fm]
}

fn groups(clustering: &Clustering) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); clustering.k()];
    for (i, l) in clustering.labels().iter().enumerate() {
        if let Label::Cluster(c) = l {
            out[*c].push(i);
        }
    }
    out
}

fn diameter(data: &Dataset, g: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for (x, &i) in g.iter().enumerate() {
        for &j in &g[x + 1..] {
            best = best.max(d(data, i, j));
        }
    }
    best
}

fn closest(data: &Dataset, g: &[usize], h: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for &i in g {
        for &j in h {
            best = best.min(d(data, i, j));
        }
    }
    best
}

pub fn dunn_brute(data: &Dataset, clustering: &Clustering) -> Option<f64> {
    let gs = groups(clustering);
    if gs.len() < 2 {
        return None;
    }
    let widest = gs.iter().map(|g| diameter(data, g)).fold(0.0, f64::max);
    if widest == 0.0 {
        return None;
    }
    let mut nearest = f64::INFINITY;
    for i in 0..gs.len() {
        for j in (i + 1)..gs.len() {
            nearest = nearest.min(closest(data, &gs[i], &gs[j]));
        }
    }
    Some(nearest / widest)
}

pub fn davies_bouldin_brute(data: &Dataset, clustering: &Clustering) -> Option<f64> {
    let gs = groups(clustering);
    let k = gs.len();
    if k < 2 {
        return None;
    }
    let diam: Vec<f64> = gs.iter().map(|g| diameter(data, g)).collect();
    let mut sum = 0.0;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in 0..k {
            if i == j {
                continue;
            }
            let sep = closest(data, &gs[i], &gs[j]);
            if sep == 0.0 {
                return None;
            }
            worst = worst.max((diam[i] + diam[j]) / sep);
        }
        sum += worst;
    }
    Some(sum / k as f64)
}

pub fn c_index_brute(data: &Dataset, clustering: &Clustering) -> Option<f64> {
    let labels = clustering.labels();
    let clustered: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i].is_noise()).collect();
    let mut all = Vec::new();
    let mut within = Vec::new();
    for (x, &i) in clustered.iter().enumerate() {
        for &j in &clustered[x + 1..] {
            all.push(d(data, i, j));
            if same_cluster(labels, i, j) {
                within.push(d(data, i, j));
            }
        }
    }
    if within.is_empty() {
        return None;
    }
    let mut ascending = all.clone();
    ascending.sort_by(f64::total_cmp);
    let mut descending = all;
    descending.sort_by(|a, b| b.total_cmp(a));
    let count = within.len();
    if count == ascending.len() || ascending[0] == descending[0] {
        return None;
    }
    let s: f64 = within.iter().sum();
    let s_min: f64 = ascending.iter().take(count).sum();
    let s_max: f64 = descending.iter().take(count).sum();
    Some(((s - s_min) / (s_max - s_min)).clamp(0.0, 1.0))
}

pub fn silhouette_brute(data: &Dataset, clustering: &Clustering) -> Option<f64> {
    let gs = groups(clustering);
    if gs.len() < 2 {
        return None;
    }
    let mean_to = |i: usize, g: &[usize]| {
        let others: Vec<f64> = g.iter().filter(|&&j| j != i).map(|&j| d(data, i, j)).collect();
        others.iter().sum::<f64>() / others.len() as f64
    };
    let mut widths = Vec::new();
    for (c, g) in gs.iter().enumerate() {
        for &i in g {
            if g.len() == 1 {
                widths.push(0.0);
                continue;
            }
            let a = mean_to(i, g);
            let b = gs
                .iter()
                .enumerate()
                .filter(|&(o, _)| o != c)
                .map(|(_, h)| mean_to(i, h))
                .fold(f64::INFINITY, f64::min);
            let top = a.max(b);
            widths.push(if top > 0.0 { (b - a) / top } else { 0.0 });
        }
    }
    Some(widths.iter().sum::<f64>() / widths.len() as f64)
}

/// Minimum spanning tree of the complete distance graph (Prim, O(m^2)).
pub fn minimum_spanning_tree(data: &Dataset) -> Vec<(usize, usize, f64)> {
    let m = data.len();
    if m == 0 {
        return Vec::new();
    }
    let mut in_tree = vec![false; m];
    let mut best = vec![(f64::INFINITY, 0usize); m];
    let mut edges = Vec::with_capacity(m - 1);
    in_tree[0] = true;
    for (j, b) in best.iter_mut().enumerate().skip(1) {
        *b = (d(data, 0, j), 0);
    }
    for _ in 1..m {
        let next = (0..m)
            .filter(|&j| !in_tree[j])
            .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0))
            .expect("vertices left");
        in_tree[next] = true;
        edges.push((best[next].1, next, best[next].0));
        for j in 0..m {
            if !in_tree[j] {
                let w = d(data, next, j);
                if w < best[j].0 {
                    best[j] = (w, next);
                }
            }
        }
    }
    edges
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| self.find(i)).collect()
    }
}

/// The `k` components left after deleting the `k - 1` heaviest MST edges.
pub fn mst_cut(data: &Dataset, k: usize) -> Clustering {
    let mut edges = minimum_spanning_tree(data);
    edges.sort_by(|a, b| b.2.total_cmp(&a.2));
    let mut ds = DisjointSet::new(data.len());
    for &(a, b, _) in edges.iter().skip(k.saturating_sub(1)) {
        ds.union(a, b);
    }
    Clustering::from_ids(&ds.labels())
}

/// Whether `clustering` is one of the partitions single linkage can produce
/// for `k` clusters under some tie-breaking order.
///
/// With `w` the smallest of the `k - 1` heaviest MST edge weights, single
/// linkage first merges everything closer than `w` and then merges along
/// edges of length exactly `w` until `k` clusters remain. So a valid
/// partition joins every pair closer than `w`, and each of its clusters is
/// connected by pairs at distance at most `w`.
pub fn is_single_link_partition(data: &Dataset, clustering: &Clustering, k: usize) -> bool {
    let m = data.len();
    if clustering.k() != k || clustering.noise_count() > 0 || k == 0 || k > m {
        return false;
    }
    if k == 1 {
        return true;
    }
    let mut weights: Vec<f64> = minimum_spanning_tree(data).iter().map(|e| e.2).collect();
    weights.sort_by(|a, b| b.total_cmp(a));
    let w = weights[k - 2];
    let labels = clustering.labels();
    let mut inside = DisjointSet::new(m);
    for i in 0..m {
        for j in (i + 1)..m {
            let dij = d(data, i, j);
            let same = same_cluster(labels, i, j);
            if dij < w && !same {
                return false;
            }
            if dij <= w && same {
                inside.union(i, j);
            }
        }
    }
    let roots = inside.labels();
    let mut seen: Vec<Option<usize>> = vec![None; k];
    for i in 0..m {
        let c = labels[i].cluster().expect("no noise");
        match seen[c] {
            None => seen[c] = Some(roots[i]),
            Some(r) if r != roots[i] => return false,
            _ => {}
        }
    }
    true
}

/// Core points and density reachability computed by transitive closure of
/// the core-to-core neighborhood relation.
pub struct DensityClosure {
    pub core: Vec<bool>,
    /// `neighbor[i][j]`: squared distance at most `eps`.
    pub neighbor: Vec<Vec<bool>>,
    /// `reach[i][j]` for core points `i`, `j` connected through cores.
    pub reach: Vec<Vec<bool>>,
}

pub fn density_closure(data: &Dataset, eps: f64, eta: usize) -> DensityClosure {
    let m = data.len();
    let neighbor: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| d2(data, i, j) <= eps).collect())
        .collect();
    let core: Vec<bool> = neighbor
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count() >= eta)
        .collect();
    let mut reach: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| core[i] && core[j] && neighbor[i][j]).collect())
        .collect();
    for via in 0..m {
        if !core[via] {
            continue;
        }
        let onward = reach[via].clone();
        for row in reach.iter_mut().filter(|row| row[via]) {
            for (r, &o) in row.iter_mut().zip(&onward) {
                *r |= o;
            }
        }
    }
    DensityClosure { core, neighbor, reach }
}

/// Checks a DBSCAN result against the closure: core points cluster exactly
/// by reachability, every border point neighbors a core point of its own
/// cluster, and no noise point neighbors any core point.
pub fn check_dbscan(data: &Dataset, eps: f64, eta: usize, clustering: &Clustering) -> Result<(), String> {
    let oracle = density_closure(data, eps, eta);
    let labels = clustering.labels();
    let m = data.len();
    let mut components = 0;
    for i in 0..m {
        if oracle.core[i] && (0..i).all(|j| !(oracle.core[j] && oracle.reach[i][j])) {
            components += 1;
        }
    }
    if components != clustering.k() {
        return Err(format!("{components} core components, {} clusters", clustering.k()));
    }
    for i in 0..m {
        if oracle.core[i] {
            if labels[i].is_noise() {
                return Err(format!("core point {i} labeled noise"));
            }
            for j in 0..m {
                if oracle.core[j] && oracle.reach[i][j] != same_cluster(labels, i, j) {
                    return Err(format!("core points {i} and {j} disagree with reachability"));
                }
            }
        } else {
            let owner = (0..m).find(|&c| oracle.core[c] && oracle.neighbor[i][c] && same_cluster(labels, i, c));
            match (labels[i], owner) {
                (Label::Noise, None) => {
                    if (0..m).any(|c| oracle.core[c] && oracle.neighbor[i][c]) {
                        return Err(format!("noise point {i} is within eps of a core point"));
                    }
                }
                (Label::Noise, Some(_)) => unreachable!("noise shares no cluster"),
                (Label::Cluster(_), None) => {
                    return Err(format!("border point {i} has no core neighbor in its cluster"));
                }
                (Label::Cluster(_), Some(_)) => {}
            }
        }
    }
    Ok(())
}

fn sse_of(data: &Dataset, assignment: &[usize], k: usize) -> f64 {
    let n = data.dim();
    let mut total = 0.0;
    for c in 0..k {
        let members: Vec<usize> = (0..assignment.len()).filter(|&i| assignment[i] == c).collect();
        let mut mean = vec![0.0; n];
        for &i in &members {
            for (mu, x) in mean.iter_mut().zip(data.row(i)) {
                *mu += x;
            }
        }
        mean.iter_mut().for_each(|mu| *mu /= members.len() as f64);
        total += members
            .iter()
            .map(|&i| squared_distance(data.row(i), &mean).expect("same dim"))
            .sum::<f64>();
    }
    total
}

/// Calls `visit` with every partition of `0..m` into exactly `k` non-empty
/// blocks, as restricted growth strings.
pub fn for_each_partition(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(pos: usize, used: usize, k: usize, current: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        let m = current.len();
        if pos == m {
            if used == k {
                visit(current);
            }
            return;
        }
        if k - used > m - pos {
            return;
        }
        for c in 0..=used.min(k - 1) {
            current[pos] = c;
            rec(pos + 1, used.max(c + 1), k, current, visit);
        }
    }
    if k == 0 || k > m {
        return;
    }
    let mut current = vec![0; m];
    rec(0, 0, k, &mut current, &mut visit);
}

/// Smallest SSE over all partitions into `k` non-empty clusters.
pub fn min_sse_exhaustive(data: &Dataset, k: usize) -> f64 {
    let mut best = f64::INFINITY;
    for_each_partition(data.len(), k, |p| best = best.min(sse_of(data, p, k)));
    best
}

fn subsets(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if current.len() == k {
            visit(current);
            return;
        }
        for i in start..m {
            current.push(i);
            rec(i + 1, m, k, current, visit);
            current.pop();
        }
    }
    rec(0, m, k, &mut Vec::new(), &mut visit);
}

/// Smallest sum of squared distances to the nearest medoid over every
/// choice of `k` medoid rows.
pub fn min_medoid_objective_exhaustive(data: &Dataset, k: usize) -> f64 {
    let mut best = f64::INFINITY;
    subsets(data.len(), k, |medoids| {
        let cost: f64 = (0..data.len())
            .map(|i| medoids.iter().map(|&r| d2(data, i, r)).fold(f64::INFINITY, f64::min))
            .sum();
        best = best.min(cost);
    });
    best
}

/// Sum of plain distances from `candidate` to every member.
pub fn medoid_cost(data: &Dataset, members: &[usize], candidate: usize) -> f64 {
    members.iter().map(|&i| d(data, i, candidate)).sum()
}

/// A labeled instance, serialized for replay when a check fails.
#[derive(Debug, Clone, Serialize)]
pub struct Instance {
    pub seed: u64,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl Instance {
    pub fn new(data: &Dataset, labels: &ReferenceLabels, seed: u64) -> Self {
        Instance {
            seed,
            rows: data.rows().map(<[f64]>::to_vec).collect(),
            labels: labels.classes().to_vec(),
        }
    }
}

/// A failed check with the instance that triggered it.
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub check: &'static str,
    pub detail: String,
    pub instance: String,
}

/// Deviation statistics for one kind of check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckStat {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub checks: Vec<CheckStat>,
}

impl OracleReport {
    fn merge(&mut self, other: OracleReport) {
        for stat in other.checks {
            match self.checks.iter_mut().find(|s| s.name == stat.name) {
                Some(s) => {
                    s.cases += stat.cases;
                    s.max_deviation = s.max_deviation.max(stat.max_deviation);
                }
                None => self.checks.push(stat),
            }
        }
    }
}

pub const TOLERANCE: f64 = 1e-9;

struct Checker<'a> {
    data: &'a Dataset,
    labels: &'a ReferenceLabels,
    seed: u64,
    report: OracleReport,
}

impl Checker<'_> {
    fn record(
        &mut self,
        name: &'static str,
        deviation: f64,
        ok: bool,
        detail: impl FnOnce() -> String,
    ) -> Result<(), HarnessError> {
        if !ok {
            let instance = serde_json::to_string(&Instance::new(self.data, self.labels, self.seed))
                .expect("finite instance serializes");
            return Err(HarnessError::OracleMismatch(Box::new(Mismatch {
                check: name,
                detail: detail(),
                instance,
            })));
        }
        match self.report.checks.iter_mut().find(|s| s.name == name) {
            Some(s) => {
                s.cases += 1;
                s.max_deviation = s.max_deviation.max(deviation);
            }
            None => self.report.checks.push(CheckStat {
                name,
                cases: 1,
                max_deviation: deviation,
            }),
        }
        Ok(())
    }

    fn compare(
        &mut self,
        name: &'static str,
        main: Result<f64, IndexError>,
        oracle: Option<f64>,
    ) -> Result<(), HarnessError> {
        match (main, oracle) {
            (Ok(a), Some(b)) => {
                let dev = (a - b).abs();
                self.record(name, dev, dev <= TOLERANCE * b.abs().max(1.0), || {
                    format!("main {a}, oracle {b}")
                })
            }
            (Err(_), None) => self.record(name, 0.0, true, String::new),
            (main, oracle) => self.record(name, f64::INFINITY, false, || {
                format!("main {main:?}, oracle {oracle:?}")
            }),
        }
    }
}

fn sorted_sq_distances(data: &Dataset) -> Vec<f64> {
    let m = data.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let v = d2(data, i, j);
            if v > 0.0 {
                out.push(v);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 1.0;
    }
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

/// Runs every oracle against the main implementations on one instance.
/// Exhaustive checks only run when `m <= 8`.
pub fn oracle_check(data: &Dataset, labels: &ReferenceLabels, seed: u64) -> Result<OracleReport, HarnessError> {
    let m = data.len();
    if m < 2 || labels.len() != m {
        return Err(HarnessError::InvalidSpec(format!(
            "oracle check needs at least 2 points and one label per point (m = {m}, labels = {})",
            labels.len()
        )));
    }
    let mut ck = Checker {
        data,
        labels,
        seed,
        report: OracleReport::default(),
    };
    let sq = sorted_sq_distances(data);

    let mut candidates = vec![labels.to_clustering()];
    for k in [2, 3] {
        if k <= m {
            candidates.push(kmeans_traced(data, &KMeansParams::new(k, seed))?.0);
        }
    }
    candidates.push(leader(data, quantile(&sq, 0.5))?);
    candidates.push(dbscan(data, quantile(&sq, 0.2), 3)?);

    for c in &candidates {
        let pc = pair_counts(labels, c)?;
        let brute = pair_counts_brute(labels, c);
        let dev = [
            pc.a.abs_diff(brute.a),
            pc.b.abs_diff(brute.b),
            pc.c.abs_diff(brute.c),
            pc.d.abs_diff(brute.d),
        ]
        .into_iter()
        .sum::<u64>() as f64;
        ck.record("pair_counts", dev, pc == brute, || {
            format!("main {pc:?}, oracle {brute:?}")
        })?;
        let [r, j, f] = external_brute(labels, c);
        ck.compare("rand", rand_index(&pc), r)?;
        ck.compare("jaccard", jaccard_index(&pc), j)?;
        ck.compare("fowlkes_mallows", fowlkes_mallows(&pc), f)?;
        ck.compare("dunn", dunn(data, c), dunn_brute(data, c))?;
        ck.compare("davies_bouldin", davies_bouldin(data, c), davies_bouldin_brute(data, c))?;
        ck.compare("c_index", c_index(data, c), c_index_brute(data, c))?;
        ck.compare("silhouette", silhouette(data, c), silhouette_brute(data, c))?;
    }

    for k in 2..=m.min(6) {
        let c = hierarchical(data, k, Linkage::Single)?;
        let ok = is_single_link_partition(data, &c, k);
        ck.record("single_link_mst", if ok { 0.0 } else { 1.0 }, ok, || {
            format!("k = {k}: {:?} vs MST cut {:?}", c.labels(), mst_cut(data, k).labels())
        })?;
    }

    for q in [0.1, 0.25, 0.5] {
        let eps = quantile(&sq, q);
        for eta in 2..=4 {
            let c = dbscan(data, eps, eta)?;
            let verdict = check_dbscan(data, eps, eta, &c);
            let ok = verdict.is_ok();
            ck.record("dbscan_closure", if ok { 0.0 } else { 1.0 }, ok, || {
                format!("eps = {eps}, eta = {eta}: {}", verdict.unwrap_err())
            })?;
        }
    }

    for k in 2..=m.min(3) {
        let (c, trace) = kmedoids_traced(data, &KMedoidsParams::new(k, seed))?;
        if trace.converged {
            let rows = c.representatives().and_then(|r| r.rows.clone()).expect("medoid rows");
            for (cluster, members) in groups(&c).iter().enumerate() {
                let own = medoid_cost(data, members, rows[cluster]);
                let best = members
                    .iter()
                    .map(|&cand| medoid_cost(data, members, cand))
                    .fold(f64::INFINITY, f64::min);
                let dev = own - best;
                ck.record("medoid_update", dev.max(0.0), dev <= TOLERANCE * best.max(1.0), || {
                    format!("k = {k}, cluster {cluster}: medoid cost {own}, best {best}")
                })?;
            }
        }
        if m <= 8 {
            let floor = min_medoid_objective_exhaustive(data, k);
            let j = c.objective().expect("k-medoids reports its objective");
            ck.record(
                "kmedoids_bound",
                (floor - j).max(0.0),
                j >= floor - TOLERANCE * floor.max(1.0),
                || format!("k = {k}: objective {j} below exhaustive minimum {floor}"),
            )?;
        }
    }

    if m <= 8 {
        for k in 2..=m.min(3) {
            let floor = min_sse_exhaustive(data, k);
            for s in 0..5 {
                let (c, _) = kmeans_traced(data, &KMeansParams::new(k, seed.wrapping_add(s)))?;
                let j = c.objective().expect("k-means reports its objective");
                ck.record(
                    "kmeans_bound",
                    (floor - j).max(0.0),
                    j >= floor - TOLERANCE * floor.max(1.0),
                    || {
                        format!(
                            "k = {k}, seed {}: SSE {j} below exhaustive minimum {floor}",
                            seed.wrapping_add(s)
                        )
                    },
                )?;
            }
        }
    }

    Ok(ck.report)
}

/// A random small instance: separated blobs, uniform noise, or points on a
/// coarse integer grid with many exact duplicates.
pub fn random_instance(rng: &mut ChaCha8Rng, max_m: usize) -> Result<(Dataset, ReferenceLabels), HarnessError> {
    let max_m = max_m.max(2);
    let dim = rng.random_range(1..=3);
    match rng.random_range(0..3) {
        0 if max_m >= 4 => {
            let clusters = rng.random_range(2..=4.min(max_m / 2));
            let per_cluster = rng.random_range(2..=(max_m / clusters).max(2));
            let spec = SyntheticSpec {
                clusters,
                per_cluster,
                dim,
                spread: rng.random_range(5.0..20.0),
                scale: 1.0,
                seed: rng.random(),
            };
            generate_synthetic(&spec)
        }
        kind => {
            let m = rng.random_range(2..=max_m);
            let values: Vec<f64> = (0..m * dim)
                .map(|_| {
                    if kind == 2 {
                        rng.random_range(0..4) as f64
                    } else {
                        rng.random_range(0.0..10.0)
                    }
                })
                .collect();
            let classes = rng.random_range(1..=3);
            let ids: Vec<usize> = (0..m).map(|_| rng.random_range(0..classes)).collect();
            Ok((Dataset::from_flat(values, m, dim)?, ReferenceLabels::from_ids(&ids)))
        }
    }
}

/// Runs [`oracle_check`] on `trials` random instances with at most `max_m`
/// points, stopping at the first mismatch.
pub fn oracle_trials(max_m: usize, trials: usize, seed: u64) -> Result<OracleReport, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport::default();
    for _ in 0..trials {
        let (data, labels) = random_instance(&mut rng, max_m)?;
        let trial_seed: u64 = rng.random();
        report.merge(oracle_check(&data, &labels, trial_seed)?);
    }
    Ok(report)
}
