use std::fmt;

use super::estimate::PairSamples;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotSet {
    Forward,
    Reflected,
}

impl fmt::Display for PlotSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlotSet::Forward => "forward",
            PlotSet::Reflected => "reflected",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotPoint {
    pub set: PlotSet,
    /// 1-based round index.
    pub round: usize,
    pub x: u32,
    pub y: u32,
}

/// Points of the sample exchangeability plot: the forward pairs followed by
/// their reflections, both labeled by round.
pub fn exchangeability_plot_data(ps: &PairSamples) -> Vec<PlotPoint> {
    let forward = ps.forward().iter().enumerate().map(|(k, p)| PlotPoint {
        set: PlotSet::Forward,
        round: k + 1,
        x: p[0],
        y: p[1],
    });
    let reflected = ps.forward().iter().enumerate().map(|(k, p)| PlotPoint {
        set: PlotSet::Reflected,
        round: k + 1,
        x: p[1],
        y: p[0],
    });
    forward.chain(reflected).collect()
}
