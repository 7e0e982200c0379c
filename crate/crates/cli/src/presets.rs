//! Named scenario sets `fig3` … `fig12` with fixed input parameters.

use std::f64::consts::PI;

use crate::scenario::{Input, Mode, Pmc, ReferenceName, Scenario, SchemeName, Setting, Sweep, SweepVariable};

pub const PRESET_IDS: [&str; 10] = ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12"];

/// A named scenario belonging to a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedScenario {
    pub name: String,
    pub scenario: Scenario,
}

fn coherent_squeezed_vacuum(alpha: f64, r: f64) -> Input {
    Input {
        port0: Mode::SqueezedVacuum { squeeze: r, squeeze_phase: 0.0 },
        port1: Mode::Coherent { amplitude: alpha, phase: 0.0 },
    }
}

fn dual_squeezed_coherent(alpha: f64, beta: f64, r: f64, z: f64) -> Input {
    Input {
        port0: Mode::SqueezedCoherent { amplitude: beta, phase: 0.0, squeeze: r, squeeze_phase: 0.0 },
        port1: Mode::SqueezedCoherent { amplitude: alpha, phase: 0.0, squeeze: z, squeeze_phase: 0.0 },
    }
}

fn sweep(variable: SweepVariable, from: f64, to: f64) -> Option<Sweep> {
    Some(Sweep { variable, from, to, points: 1001 })
}

struct Builder {
    id: &'static str,
    out: Vec<NamedScenario>,
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn add(
        &mut self,
        label: &str,
        input: Input,
        pmc: Pmc,
        scheme: SchemeName,
        bs: (Setting, Setting),
        sweep: Option<Sweep>,
    ) {
        let reference = if scheme == SchemeName::Homodyne { ReferenceName::External } else { ReferenceName::None };
        let name = format!("{}_{label}", self.id);
        self.out.push(NamedScenario {
            scenario: Scenario {
                input,
                pmc: Some(pmc),
                scheme,
                reference,
                bs1: bs.0,
                bs2: bs.1,
                working_point: Setting::Auto,
                local_oscillator: Setting::Auto,
                sweep,
                output_path: format!("{name}.csv"),
            },
            name,
        });
    }
}

const AUTO: (Setting, Setting) = (Setting::Auto, Setting::Auto);
const BALANCED: (Setting, Setting) = (Setting::Fixed(0.5), Setting::Fixed(0.5));

/// Scenarios of a figure preset, or `None` for an unknown id.
pub fn preset(id: &str) -> Option<Vec<NamedScenario>> {
    let id = PRESET_IDS.iter().copied().find(|p| *p == id)?;
    let mut b = Builder { id, out: Vec::new() };
    let fig345 = coherent_squeezed_vacuum(100.0, 1.2);
    let low = dual_squeezed_coherent(2.2, 1.4, 1.2, 0.6);
    let high = dual_squeezed_coherent(1e3, 50.0, 1.2, 0.6);
    let pmcs = [("pmc1", Pmc::Pmc1), ("pmc2", Pmc::Pmc2), ("pmc3", Pmc::Pmc3)];
    use SchemeName::*;
    use SweepVariable::*;
    match id {
        "fig3" | "fig4" | "fig5" => {
            let (scheme, bs, range) = match id {
                "fig3" => (Difference, AUTO, (0.0, 2.0 * PI)),
                // The working point is reported for a balanced second splitter.
                "fig4" => (SingleMode, (Setting::Auto, Setting::Fixed(0.5)), (0.0, 2.0 * PI)),
                _ => (Homodyne, AUTO, (0.9 * PI, 1.1 * PI)),
            };
            b.add("phi", fig345, Pmc::CohSqzVac, scheme, bs, sweep(Phi, range.0, range.1));
            b.add("tau2", fig345, Pmc::CohSqzVac, scheme, (bs.0, Setting::Auto), sweep(Tau2, 0.0, 1.0));
        }
        "fig6" => {
            let input = Input {
                port0: Mode::SqueezedVacuum { squeeze: 1.2, squeeze_phase: 0.0 },
                port1: Mode::SqueezedCoherent { amplitude: 50.0, phase: 0.0, squeeze: 0.6, squeeze_phase: 0.0 },
            };
            b.add("unbalanced", input, Pmc::SqzCohSqzVac, Homodyne, AUTO, sweep(Phi, 0.9 * PI, 1.1 * PI));
            b.add("balanced", input, Pmc::SqzCohSqzVac, Homodyne, BALANCED, sweep(Phi, 0.9 * PI, 1.1 * PI));
        }
        "fig7" => {
            for (label, pmc) in pmcs {
                b.add(label, low, pmc, Difference, AUTO, sweep(Tau1, 0.0, 1.0));
            }
        }
        "fig8" => {
            b.add("pmc1_balanced", low, Pmc::Pmc1, Difference, BALANCED, sweep(Phi, 0.0, 2.0 * PI));
            b.add("pmc2_balanced", low, Pmc::Pmc2, Difference, BALANCED, sweep(Phi, 0.0, 2.0 * PI));
            b.add("pmc3_unbalanced", low, Pmc::Pmc3, Difference, AUTO, sweep(Phi, 0.0, 2.0 * PI));
        }
        "fig9" => {
            for (label, pmc) in pmcs {
                b.add(label, high, pmc, Homodyne, AUTO, sweep(Tau1, 0.0, 1.0));
            }
        }
        "fig10" => {
            for (label, pmc) in pmcs {
                b.add(label, high, pmc, SingleMode, AUTO, sweep(Phi, 0.8 * PI, 1.2 * PI));
            }
        }
        "fig11" => {
            b.add("pmc1_balanced", high, Pmc::Pmc1, SingleMode, BALANCED, sweep(Phi, 0.8 * PI, 1.2 * PI));
            b.add("pmc2_balanced", high, Pmc::Pmc2, SingleMode, BALANCED, sweep(Phi, 0.8 * PI, 1.2 * PI));
            b.add("pmc3_unbalanced", high, Pmc::Pmc3, SingleMode, AUTO, sweep(Phi, 0.8 * PI, 1.2 * PI));
        }
        "fig12" => {
            for (label, pmc) in [("pmc1", Pmc::Pmc1), ("pmc3", Pmc::Pmc3)] {
                b.add(&format!("{label}_unbalanced"), high, pmc, Homodyne, AUTO, sweep(Phi, 0.9 * PI, 1.1 * PI));
                b.add(&format!("{label}_balanced"), high, pmc, Homodyne, BALANCED, sweep(Phi, 0.9 * PI, 1.1 * PI));
            }
        }
        _ => unreachable!(),
    }
    Some(b.out)
}
