//! Named frame shapes and the sweep corpus.

use gmlogic::frame::{
    bs_model, chain, cluster, combo_frame, powerset_frame, single_point, ComboKind, FrameError, PowersetSpec,
    DEFAULT_WORLD_BUDGET,
};
use gmlogic::PointedModel;
use std::fmt;

/// A constructor call that produces a pointed model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Point,
    /// `c` worlds, letter `k<i>` true at world `i`.
    Cluster(usize),
    /// `h` worlds, letter `k<i>` true at world `i`.
    Chain(usize),
    Bs { buttons: usize, switches: usize },
    /// Pointed at the given subset.
    Powerset { spec: PowersetSpec, point: Vec<usize> },
    Combo { kind: ComboKind, cluster: usize, buttons: usize, switches: usize },
}

fn singletons(frame: gmlogic::Frame) -> PointedModel {
    let n = frame.n();
    let val = (0..n)
        .map(|i| (format!("k{i}"), gmlogic::WorldSet::singleton(n, i)))
        .collect();
    PointedModel::new(frame, val, 0).expect("world 0 exists")
}

impl Shape {
    pub fn build(&self) -> Result<PointedModel, FrameError> {
        let budget = DEFAULT_WORLD_BUDGET;
        match self {
            Shape::Point => Ok(PointedModel::bare(single_point(), 0)?),
            Shape::Cluster(c) => Ok(singletons(cluster(*c))),
            Shape::Chain(h) => Ok(singletons(chain(*h))),
            Shape::Bs { buttons, switches } => bs_model(*buttons, *switches, budget),
            Shape::Powerset { spec, point } => powerset_frame(spec, point, budget),
            Shape::Combo {
                kind,
                cluster,
                buttons,
                switches,
            } => combo_frame(*kind, *cluster, *buttons, *switches, budget),
        }
    }

    pub fn is_powerset(&self) -> bool {
        matches!(self, Shape::Powerset { .. })
    }
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Point => write!(f, "point"),
            Shape::Cluster(c) => write!(f, "cluster({c})"),
            Shape::Chain(h) => write!(f, "chain({h})"),
            Shape::Bs { buttons, switches } => write!(f, "bs({buttons},{switches})"),
            Shape::Powerset { spec, point } => {
                let classes: Vec<String> = spec.classes.iter().map(|c| list(c)).collect();
                write!(
                    f,
                    "powerset(buttons={};classes={};point={})",
                    list(&spec.buttons),
                    classes.join("|"),
                    list(point)
                )
            }
            Shape::Combo {
                kind,
                cluster,
                buttons,
                switches,
            } => {
                let name = match kind {
                    ComboKind::ClusterBelowBs => "cluster_below_bs",
                    ComboKind::ClusterAboveBs => "cluster_above_bs",
                };
                write!(f, "{name}({cluster},{buttons},{switches})")
            }
        }
    }
}

/// The powerset shape used by the single-frame experiments: two button
/// indices and two parity classes of three, pointed at the full set.
pub fn thm4_shape() -> Shape {
    let spec = PowersetSpec {
        buttons: vec![0, 1],
        classes: vec![vec![2, 3, 4], vec![5, 6, 7]],
    };
    let point = spec.indices();
    Shape::Powerset { spec, point }
}

/// Every shape swept by the corpus experiments, smallest first within each
/// constructor.
pub fn corpus() -> Vec<Shape> {
    let mut out = vec![Shape::Point];
    out.extend((1..=5).map(Shape::Cluster));
    out.extend((2..=5).map(Shape::Chain));
    for buttons in 0..=3 {
        for switches in 0..=2 {
            if buttons + switches <= 4 {
                out.push(Shape::Bs { buttons, switches });
            }
        }
    }
    let specs = [
        (vec![0], vec![]),
        (vec![0, 1], vec![]),
        (vec![0, 1, 2], vec![]),
        (vec![], vec![vec![0, 1, 2]]),
        (vec![0], vec![vec![1, 2, 3]]),
        (vec![0, 1], vec![vec![2, 3, 4]]),
        (vec![0], vec![vec![1, 2], vec![3, 4]]),
    ];
    for (buttons, classes) in specs {
        let spec = PowersetSpec { buttons, classes };
        let all = spec.indices();
        // full set, and the set missing its least index
        out.push(Shape::Powerset {
            spec: spec.clone(),
            point: all.clone(),
        });
        out.push(Shape::Powerset {
            spec,
            point: all[1..].to_vec(),
        });
    }
    out.push(thm4_shape());
    for kind in [ComboKind::ClusterBelowBs, ComboKind::ClusterAboveBs] {
        for cluster in 1..=2 {
            for buttons in 1..=2 {
                for switches in 0..=1 {
                    out.push(Shape::Combo {
                        kind,
                        cluster,
                        buttons,
                        switches,
                    });
                }
            }
        }
    }
    out
}
