use std::fmt;
use std::str::FromStr;

use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::graph::{EventId, SpaceGraph};
use super::matching::{apply_in_place, find_matches, site_tags, Match};
use super::rule::RuleSet;
use super::CausalError;

/// How the next event is picked among all current matches, which are
/// listed by host vertex tuple and then rule index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// Always the first match.
    FixedOrder,
    /// Uniformly at random from a seeded generator.
    Random(u64),
    /// The listed match indices, one per step; stops when the list runs out.
    Explicit(Vec<usize>),
}

impl FromStr for Schedule {
    type Err = CausalError;

    /// `fixed`, `random:<seed>` or `explicit:<i>,<j>,...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CausalError::BadSchedule(s.to_string());
        match s.split_once(':') {
            None if s == "fixed" => Ok(Schedule::FixedOrder),
            Some(("random", seed)) => seed.parse().map(Schedule::Random).map_err(|_| bad()),
            Some(("explicit", "")) => Ok(Schedule::Explicit(vec![])),
            Some(("explicit", list)) => list
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .map(Schedule::Explicit)
                .map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::FixedOrder => f.write_str("fixed"),
            Schedule::Random(seed) => write!(f, "random:{seed}"),
            Schedule::Explicit(list) => {
                let parts: Vec<String> = list.iter().map(ToString::to_string).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl Serialize for Schedule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Event {
    pub id: EventId,
    pub rule: usize,
    pub site: Match,
    /// Creation tags found on the site when it was rewritten.
    pub site_tags: Vec<EventId>,
}

/// Events and their dependencies: `(a, b)` means event `b` rewrote
/// something event `a` created.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CausalNetwork {
    /// Events applied to the input graph before this network began; tags at
    /// or below it are ignored.
    #[serde(skip)]
    pub base: EventId,
    pub events: Vec<Event>,
    pub dependencies: Vec<(EventId, EventId)>,
}

impl CausalNetwork {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Checks that every dependency points forward and is backed by a
    /// recorded site tag, and that every nonzero site tag has its
    /// dependency.
    pub fn check(&self) -> Result<(), CausalError> {
        let mut derived: Vec<(EventId, EventId)> = self
            .events
            .iter()
            .flat_map(|e| e.site_tags.iter().filter(|&&t| t > self.base).map(move |&t| (t, e.id)))
            .collect();
        derived.sort_unstable();
        if derived != self.dependencies || self.dependencies.iter().any(|&(a, b)| a >= b) {
            return Err(CausalError::InconsistentNetwork);
        }
        Ok(())
    }

    /// As a petgraph DAG with rule indices as node weights.
    pub fn to_petgraph(&self) -> DiGraph<usize, ()> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = self.events.iter().map(|e| g.add_node(e.rule)).collect();
        for &(a, b) in &self.dependencies {
            g.add_edge(nodes[(a - self.base) as usize - 1], nodes[(b - self.base) as usize - 1], ());
        }
        g
    }

    /// Isomorphism of the dependency DAGs, respecting rule labels.
    pub fn same_shape(&self, other: &CausalNetwork) -> bool {
        self.len() == other.len()
            && self.dependencies.len() == other.dependencies.len()
            && petgraph::algo::is_isomorphic_matching(&self.to_petgraph(), &other.to_petgraph(), |a, b| a == b, |_, _| true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildResult {
    #[serde(skip)]
    pub graph: SpaceGraph,
    pub network: CausalNetwork,
    /// Index chosen at each step; replaying them as an explicit schedule
    /// reproduces the run.
    pub choices: Vec<usize>,
    /// No match was left when the run stopped.
    pub terminated: bool,
}

/// All current matches, by host vertex tuple then rule index.
pub fn all_matches(g: &SpaceGraph, rules: &RuleSet) -> Result<Vec<(usize, Match)>, CausalError> {
    let mut all = Vec::new();
    for (i, r) in rules.rules.iter().enumerate() {
        all.extend(find_matches(g, r)?.into_iter().map(|m| (i, m)));
    }
    all.sort_by(|a, b| (&a.1, a.0).cmp(&(&b.1, b.0)));
    Ok(all)
}

/// Applies up to `steps` events chosen by `schedule`, recording each event
/// and the dependencies implied by creation tags.
pub fn build_causal_network(
    g: &SpaceGraph,
    rules: &RuleSet,
    schedule: &Schedule,
    steps: usize,
) -> Result<BuildResult, CausalError> {
    let mut graph = g.clone();
    let mut rng = match schedule {
        Schedule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut net = CausalNetwork { base: g.events(), ..CausalNetwork::default() };
    let mut choices = Vec::new();
    let mut terminated = false;
    for step in 0..steps {
        let matches = all_matches(&graph, rules)?;
        if matches.is_empty() {
            terminated = true;
            break;
        }
        let pick = match schedule {
            Schedule::FixedOrder => 0,
            Schedule::Random(_) => rng.as_mut().expect("seeded").gen_range(0..matches.len()),
            Schedule::Explicit(list) => match list.get(step) {
                None => break,
                Some(&i) if i < matches.len() => i,
                Some(&i) => return Err(CausalError::ChoiceOutOfRange { step, choice: i, available: matches.len() }),
            },
        };
        let (rule, site) = &matches[pick];
        apply_event(&mut graph, rules, &mut net, *rule, site)?;
        choices.push(pick);
    }
    if !terminated && choices.len() == steps {
        terminated = all_matches(&graph, rules)?.is_empty();
    }
    Ok(BuildResult { graph, network: net, choices, terminated })
}

pub(crate) fn apply_event(
    graph: &mut SpaceGraph,
    rules: &RuleSet,
    net: &mut CausalNetwork,
    rule: usize,
    site: &Match,
) -> Result<(), CausalError> {
    let tags = site_tags(graph, site);
    let id = apply_in_place(graph, &rules.rules[rule], site)?;
    for &t in tags.iter().filter(|&&t| t > net.base) {
        net.dependencies.push((t, id));
    }
    net.dependencies.sort_unstable();
    net.events.push(Event { id, rule, site: site.clone(), site_tags: tags });
    Ok(())
}
