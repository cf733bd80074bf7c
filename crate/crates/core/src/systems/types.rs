use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::model::{Axis, Construction, Diagnostic, Gadget, Location, PortSpec};
use crate::push1::Push1Grid;

/// What an instance is made of.
#[derive(Clone, Debug)]
pub enum Component {
    Gadget(Gadget),
    Grid(Push1Grid),
    System(Box<GadgetSystem>),
}

impl Component {
    /// The component's own ports, sorted by location, before any axis
    /// declarations of the enclosing system.
    pub fn port_specs(&self) -> Vec<PortSpec> {
        match self {
            Component::Gadget(g) => {
                let mut locs = g.locations.clone();
                locs.sort();
                locs.dedup();
                locs.into_iter().map(PortSpec::open).collect()
            }
            Component::Grid(g) => g.ports(),
            Component::System(s) => s.port_specs(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Component::Gadget(_) => "gadget",
            Component::Grid(_) => "grid",
            Component::System(_) => "system",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub component: Component,
}

impl Instance {
    pub fn new(name: impl Into<String>, component: Component) -> Self {
        Instance {
            name: name.into(),
            component,
        }
    }
}

/// `instance.location`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub instance: String,
    pub location: Location,
}

impl Endpoint {
    pub fn new(instance: impl Into<String>, location: impl Into<Location>) -> Self {
        Endpoint {
            instance: instance.into(),
            location: location.into(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.instance, self.location)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// The agent walks across; blocks never do.
    Free,
    /// The two ports face each other, so a block pushed out of one is
    /// pushed into the other.
    Block,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Free => "free",
            EdgeKind::Block => "block",
        })
    }
}

/// An undirected connection between two instance locations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: Endpoint,
    pub b: Endpoint,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn new(a: Endpoint, b: Endpoint, kind: EdgeKind) -> Self {
        Edge { a, b, kind }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge {} -- {} kind={}", self.a, self.b, self.kind)
    }
}

/// An instance location made a port of the system under a new label.
/// Unset capabilities are inherited from the underlying port.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exposure {
    pub endpoint: Endpoint,
    pub label: Location,
    pub block_in: Option<bool>,
    pub block_out: Option<bool>,
}

impl Exposure {
    pub fn new(endpoint: Endpoint, label: impl Into<Location>) -> Self {
        Exposure {
            endpoint,
            label: label.into(),
            block_in: None,
            block_out: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct GadgetSystem {
    pub instances: Vec<Instance>,
    pub edges: Vec<Edge>,
    pub exposed: Vec<Exposure>,
    /// Axes for locations that have no geometry of their own.
    pub axes: Vec<(Endpoint, Axis)>,
}

impl GadgetSystem {
    pub fn instance(&self, name: &str) -> Option<&Instance> {
        self.instances.iter().find(|i| i.name == name)
    }

    /// The port of an endpoint, with any declared axis applied.
    pub(crate) fn endpoint_spec(&self, e: &Endpoint) -> Option<PortSpec> {
        let inst = self.instance(&e.instance)?;
        let mut spec = inst
            .component
            .port_specs()
            .into_iter()
            .find(|p| p.location == e.location)?;
        if let Some((_, axis)) = self.axes.iter().find(|(x, _)| x == e) {
            spec.axis = spec.axis.or(Some(*axis));
        }
        Some(spec)
    }

    /// The exposed ports, sorted by label.
    pub fn port_specs(&self) -> Vec<PortSpec> {
        let mut out: Vec<PortSpec> = self
            .exposed
            .iter()
            .filter_map(|x| {
                let inner = self.endpoint_spec(&x.endpoint)?;
                Some(PortSpec {
                    location: x.label.clone(),
                    block_in: x.block_in.unwrap_or(inner.block_in),
                    block_out: x.block_out.unwrap_or(inner.block_out),
                    axis: inner.axis,
                })
            })
            .collect();
        out.sort_by(|a, b| a.location.cmp(&b.location));
        out
    }
}

/// Every violated system invariant, nested components included.
pub fn validate_system(s: &GadgetSystem) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut names = HashSet::new();
    for inst in &s.instances {
        if !names.insert(inst.name.as_str()) {
            out.push(Diagnostic::new(
                format!("instance {}", inst.name),
                "declared more than once",
            ));
        }
        let nested = match &inst.component {
            Component::Gadget(g) => g.validate(),
            Component::System(sub) => validate_system(sub),
            Component::Grid(_) => Vec::new(),
        };
        for d in nested {
            out.push(Diagnostic::new(
                format!("{} {} / {}", inst.component.kind(), inst.name, d.subject),
                d.message,
            ));
        }
    }

    let known = |e: &Endpoint, out: &mut Vec<Diagnostic>, what: &str| -> bool {
        let Some(inst) = s.instance(&e.instance) else {
            out.push(Diagnostic::new(
                what.to_owned(),
                format!("unknown instance {}", e.instance),
            ));
            return false;
        };
        if !inst
            .component
            .port_specs()
            .iter()
            .any(|p| p.location == e.location)
        {
            out.push(Diagnostic::new(
                what.to_owned(),
                format!("{} has no location {}", e.instance, e.location),
            ));
            return false;
        }
        true
    };

    let mut edge_ends: BTreeSet<&Endpoint> = BTreeSet::new();
    for edge in &s.edges {
        let what = edge.to_string();
        let ok_a = known(&edge.a, &mut out, &what);
        let ok_b = known(&edge.b, &mut out, &what);
        edge_ends.insert(&edge.a);
        edge_ends.insert(&edge.b);
        if edge.a == edge.b {
            out.push(Diagnostic::new(
                what.clone(),
                "connects a location to itself",
            ));
        }
        if edge.kind == EdgeKind::Block && ok_a && ok_b {
            let (pa, pb) = (s.endpoint_spec(&edge.a), s.endpoint_spec(&edge.b));
            match (pa.and_then(|p| p.axis), pb.and_then(|p| p.axis)) {
                (Some(x), Some(y)) if x != y => {
                    out.push(Diagnostic::new(
                        what,
                        format!("axes differ: {} is {x}, {} is {y}", edge.a, edge.b),
                    ));
                }
                (Some(_), Some(_)) => {}
                (x, y) => {
                    let missing: Vec<String> = [(x, &edge.a), (y, &edge.b)]
                        .iter()
                        .filter(|(axis, _)| axis.is_none())
                        .map(|(_, e)| e.to_string())
                        .collect();
                    out.push(Diagnostic::new(
                        what,
                        format!(
                            "block edge needs a declared axis on {}",
                            missing.join(" and ")
                        ),
                    ));
                }
            }
        }
    }

    let mut labels = HashSet::new();
    for x in &s.exposed {
        let what = format!("expose {} as {}", x.endpoint, x.label);
        if !known(&x.endpoint, &mut out, &what) {
            continue;
        }
        if edge_ends.contains(&x.endpoint) {
            out.push(Diagnostic::new(
                what.clone(),
                "exposed port is also an edge endpoint",
            ));
        }
        if !labels.insert(&x.label) {
            out.push(Diagnostic::new(
                what.clone(),
                format!("label {} is exposed more than once", x.label),
            ));
        }
        if let Some(inner) = s.endpoint_spec(&x.endpoint) {
            if x.block_in == Some(true) && !inner.block_in {
                out.push(Diagnostic::new(
                    what.clone(),
                    "block_in=yes but the underlying port refuses blocks",
                ));
            }
            if x.block_out == Some(true) && !inner.block_out {
                out.push(Diagnostic::new(
                    what,
                    "block_out=yes but the underlying port never releases blocks",
                ));
            }
        }
    }

    let mut declared: HashMap<&Endpoint, Axis> = HashMap::new();
    for (e, axis) in &s.axes {
        let what = format!("axis {e} {axis}");
        if !known(e, &mut out, &what) {
            continue;
        }
        if declared.insert(e, *axis).is_some_and(|prev| prev != *axis) {
            out.push(Diagnostic::new(
                what.clone(),
                "conflicts with an earlier declaration",
            ));
        }
        let own = s
            .instance(&e.instance)
            .and_then(|i| {
                i.component
                    .port_specs()
                    .into_iter()
                    .find(|p| p.location == e.location)
            })
            .and_then(|p| p.axis);
        if own.is_some_and(|a| a != *axis) {
            out.push(Diagnostic::new(what, "contradicts the port's own geometry"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    pub(crate) fn chained_dicrumblers() -> GadgetSystem {
        GadgetSystem {
            instances: vec![
                Instance::new("d1", Component::Gadget(fixtures::dicrumbler())),
                Instance::new("d2", Component::Gadget(fixtures::dicrumbler())),
            ],
            edges: vec![Edge::new(
                Endpoint::new("d1", "B"),
                Endpoint::new("d2", "A"),
                EdgeKind::Free,
            )],
            exposed: vec![
                Exposure::new(Endpoint::new("d1", "A"), "A"),
                Exposure::new(Endpoint::new("d2", "B"), "B"),
            ],
            axes: vec![],
        }
    }

    #[test]
    fn chain_is_valid() {
        assert_eq!(validate_system(&chained_dicrumblers()), vec![]);
    }

    #[test]
    fn mismatched_block_axes_are_reported() {
        let mut s = chained_dicrumblers();
        s.edges[0].kind = EdgeKind::Block;
        s.axes = vec![
            (Endpoint::new("d1", "B"), Axis::Horizontal),
            (Endpoint::new("d2", "A"), Axis::Vertical),
        ];
        let d = validate_system(&s);
        assert_eq!(d.len(), 1, "{d:?}");
        assert!(d[0].message.contains("axes differ"));
    }

    #[test]
    fn block_edge_without_axes_is_reported() {
        let mut s = chained_dicrumblers();
        s.edges[0].kind = EdgeKind::Block;
        let d = validate_system(&s);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("d1.B and d2.A"), "{}", d[0].message);
    }

    #[test]
    fn exposed_edge_endpoint_is_reported() {
        let mut s = chained_dicrumblers();
        s.exposed.push(Exposure::new(Endpoint::new("d1", "B"), "C"));
        let d = validate_system(&s);
        assert_eq!(d.len(), 1);
        assert!(d[0].subject.contains("d1.B"));
    }

    #[test]
    fn dangling_references_are_reported() {
        let mut s = chained_dicrumblers();
        s.edges.push(Edge::new(
            Endpoint::new("d3", "A"),
            Endpoint::new("d1", "Q"),
            EdgeKind::Free,
        ));
        s.exposed.push(Exposure::new(Endpoint::new("d1", "A"), "A"));
        let d = validate_system(&s);
        let messages: Vec<&str> = d.iter().map(|x| x.message.as_str()).collect();
        assert!(messages.contains(&"unknown instance d3"));
        assert!(messages.contains(&"d1 has no location Q"));
        assert!(messages
            .iter()
            .any(|m| m.contains("exposed more than once")));
    }

    #[test]
    fn inherited_capabilities() {
        let grid = Push1Grid::parse(fixtures::BLOCK_TRANSIT_HALL).unwrap();
        let s = GadgetSystem {
            instances: vec![Instance::new("h", Component::Grid(grid))],
            exposed: vec![
                Exposure::new(Endpoint::new("h", "A"), "IN"),
                Exposure {
                    block_out: Some(false),
                    ..Exposure::new(Endpoint::new("h", "B"), "OUT")
                },
            ],
            ..Default::default()
        };
        let ports = s.port_specs();
        assert_eq!(
            (
                ports[0].location.as_str(),
                ports[0].block_in,
                ports[0].block_out
            ),
            ("IN", true, false)
        );
        assert_eq!(
            (
                ports[1].location.as_str(),
                ports[1].block_in,
                ports[1].block_out
            ),
            ("OUT", false, false)
        );
        assert_eq!(ports[0].axis, Some(Axis::Horizontal));
    }
}
