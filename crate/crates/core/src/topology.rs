//! Network graphs: validation, centrality and next-hop tables.
//!
//! A [`Topology`] is an undirected, connected simple graph whose nodes are
//! routers, consumers or producers. Consumers and producers are leaves that
//! hang off exactly one router. Routing and centrality use hop counts; link
//! bandwidth and delay only matter to the simulator's timing.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense, zero-based node index within one topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Router,
    Consumer,
    Producer,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Router => "router",
            NodeKind::Consumer => "consumer",
            NodeKind::Producer => "producer",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for NodeKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "router" => Ok(NodeKind::Router),
            "consumer" => Ok(NodeKind::Consumer),
            "producer" => Ok(NodeKind::Producer),
            _ => Err(()),
        }
    }
}

/// Symmetric full-duplex link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub bandwidth_bps: f64,
    pub delay_s: f64,
}

impl Link {
    pub fn new(a: usize, b: usize, bandwidth_bps: f64, delay_s: f64) -> Self {
        Self {
            a: NodeId(a),
            b: NodeId(b),
            bandwidth_bps,
            delay_s,
        }
    }

    /// The endpoint opposite `n`, if `n` is an endpoint.
    pub fn other(&self, n: NodeId) -> Option<NodeId> {
        if n == self.a {
            Some(self.b)
        } else if n == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TopologyError {
    Empty,
    UnknownNode { link: usize, node: NodeId },
    SelfLoop { link: usize, node: NodeId },
    DuplicateEdge { a: NodeId, b: NodeId },
    InvalidLinkParameters { link: usize },
    Disconnected { unreachable: NodeId },
    LeafDegree { node: NodeId, kind: NodeKind, degree: usize },
    LeafNotOnRouter { node: NodeId, neighbor: NodeId },
}

impl fmt::Display for TopologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyError::Empty => f.write_str("topology has no nodes"),
            TopologyError::UnknownNode { link, node } => {
                write!(f, "link {link} references unknown node {node}")
            }
            TopologyError::SelfLoop { link, node } => {
                write!(f, "link {link} is a self-loop on node {node}")
            }
            TopologyError::DuplicateEdge { a, b } => write!(f, "duplicate edge {a}-{b}"),
            TopologyError::InvalidLinkParameters { link } => {
                write!(f, "link {link} needs bandwidth > 0 and delay >= 0")
            }
            TopologyError::Disconnected { unreachable } => {
                write!(f, "graph is disconnected: node {unreachable} unreachable from node 0")
            }
            TopologyError::LeafDegree { node, kind, degree } => {
                write!(f, "{kind} {node} has degree {degree}, expected exactly 1")
            }
            TopologyError::LeafNotOnRouter { node, neighbor } => {
                write!(f, "node {node} must attach to a router, found {neighbor}")
            }
        }
    }
}

impl core::error::Error for TopologyError {}

#[derive(Debug, Clone)]
pub struct Topology {
    kinds: Vec<NodeKind>,
    links: Vec<Link>,
    // (neighbor, link index), sorted by neighbor id
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl Topology {
    /// Builds a topology and checks every structural invariant.
    pub fn new(kinds: Vec<NodeKind>, links: Vec<Link>) -> Result<Self, TopologyError> {
        let n = kinds.len();
        if n == 0 {
            return Err(TopologyError::Empty);
        }
        let mut adjacency: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
        for (i, link) in links.iter().enumerate() {
            for node in [link.a, link.b] {
                if node.0 >= n {
                    return Err(TopologyError::UnknownNode { link: i, node });
                }
            }
            if link.a == link.b {
                return Err(TopologyError::SelfLoop { link: i, node: link.a });
            }
            if !(link.bandwidth_bps > 0.0) || !(link.delay_s >= 0.0) || !link.delay_s.is_finite() {
                return Err(TopologyError::InvalidLinkParameters { link: i });
            }
            if adjacency[link.a.0].iter().any(|&(w, _)| w == link.b) {
                let (a, b) = if link.a < link.b { (link.a, link.b) } else { (link.b, link.a) };
                return Err(TopologyError::DuplicateEdge { a, b });
            }
            adjacency[link.a.0].push((link.b, i));
            adjacency[link.b.0].push((link.a, i));
        }
        for adj in adjacency.iter_mut() {
            adj.sort_unstable_by_key(|&(w, _)| w);
        }

        let topo = Self {
            kinds,
            links,
            adjacency,
        };

        let dist = topo.hop_distances(NodeId(0));
        if let Some(v) = dist.iter().position(|d| d.is_none()) {
            return Err(TopologyError::Disconnected {
                unreachable: NodeId(v),
            });
        }
        for v in topo.nodes() {
            let kind = topo.kind(v);
            if kind == NodeKind::Router {
                continue;
            }
            let degree = topo.degree(v);
            if degree != 1 {
                return Err(TopologyError::LeafDegree { node: v, kind, degree });
            }
            let neighbor = topo.adjacency[v.0][0].0;
            if topo.kind(neighbor) != NodeKind::Router {
                return Err(TopologyError::LeafNotOnRouter { node: v, neighbor });
            }
        }
        Ok(topo)
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.kinds.len()).map(NodeId)
    }

    pub fn kind(&self, n: NodeId) -> NodeKind {
        self.kinds[n.0]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.kind(v) == kind).collect()
    }

    pub fn routers(&self) -> Vec<NodeId> {
        self.nodes_of_kind(NodeKind::Router)
    }

    pub fn consumers(&self) -> Vec<NodeId> {
        self.nodes_of_kind(NodeKind::Consumer)
    }

    pub fn producers(&self) -> Vec<NodeId> {
        self.nodes_of_kind(NodeKind::Producer)
    }

    /// Neighbors in ascending id order.
    pub fn neighbors(&self, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[n.0].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.adjacency[n.0].len()
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<&Link> {
        self.adjacency[a.0]
            .binary_search_by_key(&b, |&(w, _)| w)
            .ok()
            .map(|i| &self.links[self.adjacency[a.0][i].1])
    }

    /// For a consumer or producer, the router it hangs off.
    pub fn attachment(&self, leaf: NodeId) -> Option<NodeId> {
        match self.kind(leaf) {
            NodeKind::Router => None,
            _ => self.adjacency[leaf.0].first().map(|&(w, _)| w),
        }
    }

    /// BFS hop counts from `source`; `None` for unreachable nodes.
    pub fn hop_distances(&self, source: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source.0] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v.0].unwrap_or(0);
            for w in self.neighbors(v) {
                if dist[w.0].is_none() {
                    dist[w.0] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Un-normalized centrality score per node, indexed by [`NodeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    values: Vec<f64>,
}

impl CentralityVector {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn get(&self, n: NodeId) -> f64 {
        self.values[n.0]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Values for `nodes`, in the given order.
    pub fn select(&self, nodes: &[NodeId]) -> Vec<f64> {
        nodes.iter().map(|&n| self.values[n.0]).collect()
    }
}

/// Brandes betweenness over hop-count shortest paths.
///
/// Each unordered pair `{s, t}` contributes once and endpoints are excluded,
/// so a node on every geodesic of `k` pairs scores `k`. The whole graph,
/// leaves included, takes part; callers restrict to routers afterwards.
pub fn betweenness(topology: &Topology) -> CentralityVector {
    let n = topology.node_count();
    let mut bc = vec![0.0f64; n];

    let mut order = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        order.clear();
        for p in preds.iter_mut() {
            p.clear();
        }
        sigma.fill(0.0);
        dist.fill(usize::MAX);
        delta.fill(0.0);

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in topology.neighbors(NodeId(v)).map(NodeId::index) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        // dependencies accumulate from the farthest layer inwards
        while let Some(w) = order.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }

    // every unordered pair was visited from both ends
    for b in bc.iter_mut() {
        *b *= 0.5;
    }
    CentralityVector { values: bc }
}

/// Number of incident links per node, leaf attachments included.
pub fn degree_centrality(topology: &Topology) -> CentralityVector {
    CentralityVector {
        values: topology.nodes().map(|v| topology.degree(v) as f64).collect(),
    }
}

/// All-pairs next hops along minimum-hop paths.
///
/// Ties are broken towards the smallest neighbor id, which keeps routes
/// deterministic and loop-free.
#[derive(Debug, Clone)]
pub struct NextHopTable {
    n: usize,
    hops: Vec<Option<NodeId>>,
}

impl NextHopTable {
    pub fn get(&self, from: NodeId, to: NodeId) -> Option<NodeId> {
        self.hops[from.0 * self.n + to.0]
    }

    /// Full hop sequence from `from` to `to`, both ends included.
    pub fn route(&self, from: NodeId, to: NodeId) -> Vec<NodeId> {
        let mut path = vec![from];
        let mut at = from;
        while at != to {
            match self.get(at, to) {
                Some(next) if path.len() <= self.n => {
                    path.push(next);
                    at = next;
                }
                _ => break,
            }
        }
        path
    }
}

pub fn next_hops(topology: &Topology) -> NextHopTable {
    let n = topology.node_count();
    let mut hops = vec![None; n * n];
    for t in topology.nodes() {
        let dist = topology.hop_distances(t);
        for s in topology.nodes() {
            if s == t {
                continue;
            }
            let Some(ds) = dist[s.0] else { continue };
            // neighbors are sorted, so the first closer one has the smallest id
            hops[s.0 * n + t.0] = topology
                .neighbors(s)
                .find(|w| dist[w.0].is_some_and(|dw| dw + 1 == ds));
        }
    }
    NextHopTable { n, hops }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn routers(n: usize) -> Vec<NodeKind> {
        vec![NodeKind::Router; n]
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> Topology {
        let links = edges.iter().map(|&(a, b)| Link::new(a, b, 1e9, 0.001)).collect();
        Topology::new(routers(n), links).unwrap()
    }

    fn star(leaves: usize) -> Topology {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        graph(leaves + 1, &edges)
    }

    #[test]
    fn minimal_two_router_topology() {
        let t = graph(2, &[(0, 1)]);
        assert_eq!(t.links().len(), 1);
        assert_eq!(t.node_count(), 2);
    }

    #[test]
    fn rejects_structural_violations() {
        let r = Topology::new(routers(2), vec![Link::new(0, 2, 1e9, 0.0)]);
        assert!(matches!(r, Err(TopologyError::UnknownNode { .. })));
        let r = Topology::new(routers(2), vec![Link::new(1, 1, 1e9, 0.0)]);
        assert!(matches!(r, Err(TopologyError::SelfLoop { .. })));
        let r = Topology::new(
            routers(2),
            vec![Link::new(0, 1, 1e9, 0.0), Link::new(1, 0, 1e9, 0.0)],
        );
        assert!(matches!(r, Err(TopologyError::DuplicateEdge { .. })));
        let r = Topology::new(routers(3), vec![Link::new(0, 1, 1e9, 0.0)]);
        assert!(matches!(r, Err(TopologyError::Disconnected { unreachable: NodeId(2) })));
        let r = Topology::new(routers(2), vec![Link::new(0, 1, 0.0, 0.0)]);
        assert!(matches!(r, Err(TopologyError::InvalidLinkParameters { .. })));
        assert_eq!(Topology::new(Vec::new(), Vec::new()).unwrap_err(), TopologyError::Empty);
    }

    #[test]
    fn leaves_must_hang_off_one_router() {
        use NodeKind::*;
        let r = Topology::new(
            vec![Router, Consumer, Producer],
            vec![Link::new(0, 1, 1e9, 0.0), Link::new(1, 2, 1e9, 0.0)],
        );
        assert!(matches!(r, Err(TopologyError::LeafDegree { node: NodeId(1), .. })));
        let r = Topology::new(vec![Consumer, Producer], vec![Link::new(0, 1, 1e9, 0.0)]);
        assert!(matches!(r, Err(TopologyError::LeafNotOnRouter { .. })));
        let t = Topology::new(
            vec![Router, Consumer, Producer],
            vec![Link::new(0, 1, 1e9, 0.0), Link::new(0, 2, 1e9, 0.0)],
        )
        .unwrap();
        assert_eq!(t.attachment(NodeId(1)), Some(NodeId(0)));
        assert_eq!(t.attachment(NodeId(0)), None);
    }

    #[test]
    fn star_center_lies_on_every_leaf_pair() {
        let bc = betweenness(&star(5));
        assert_eq!(bc.get(NodeId(0)), 10.0);
        for leaf in 1..=5 {
            assert_eq!(bc.get(NodeId(leaf)), 0.0);
        }
    }

    #[test]
    fn path_interior_nodes() {
        let bc = betweenness(&graph(4, &[(0, 1), (1, 2), (2, 3)]));
        assert_eq!(bc.as_slice(), &[0.0, 2.0, 2.0, 0.0]);
    }

    #[test]
    fn square_splits_dependency_between_two_geodesics() {
        // pairs (0,2) and (1,3) each have two geodesics
        let bc = betweenness(&graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]));
        for v in 0..4 {
            assert!((bc.get(NodeId(v)) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_centrality(&star(5)).get(NodeId(0)), 5.0);
        let path = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(degree_centrality(&path).get(NodeId(0)), 1.0);
        let tri = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(degree_centrality(&tri).as_slice(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn next_hop_examples() {
        let path = graph(3, &[(0, 1), (1, 2)]);
        let nh = next_hops(&path);
        assert_eq!(nh.get(NodeId(0), NodeId(2)), Some(NodeId(1)));
        assert_eq!(nh.get(NodeId(1), NodeId(1)), None);

        let square = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let nh = next_hops(&square);
        assert_eq!(nh.get(NodeId(0), NodeId(2)), Some(NodeId(1)));
        assert_eq!(nh.route(NodeId(0), NodeId(2)), vec![NodeId(0), NodeId(1), NodeId(2)]);
    }

    #[test]
    fn link_lookup_is_symmetric() {
        let t = graph(3, &[(0, 1), (1, 2)]);
        assert!(t.link_between(NodeId(0), NodeId(1)).is_some());
        assert!(t.link_between(NodeId(1), NodeId(0)).is_some());
        assert!(t.link_between(NodeId(0), NodeId(2)).is_none());
    }
}
