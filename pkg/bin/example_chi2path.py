"""
An example script for a possible usage of the chi2path package: the phase-matching law of a dielectric slab, the
biphoton amplitude behind it, its squeezing parameter and the first-order diagrams.
Give the output directory as sys.argv[1]

:Example:
python example_chi2path.py chi2path_results
"""

import sys
from os.path import dirname, join

import chi2path
from chi2path.diagrams import enumerate_diagrams
from chi2path.nonlinear import biphoton_numeric
from chi2path.scenario import read_scenario, run_scenario
from chi2path.squeezing import squeezed_vacuum_coefficients, squeezing_1d_closed_form


def main(output_dir='chi2path_results'):
    # load the example scenario shipped with the package
    scenario = read_scenario(join(dirname(chi2path.__file__), 'data', 'example_scenario.json'))

    # sweep the phase mismatch and write the sinc^2 law with its run manifest
    result = run_scenario(scenario, output_dir=output_dir)
    print("Written outputs: %s" % ', '.join(result.outputs))

    # biphoton amplitude of the slab at the probe coordinates
    medium = scenario.build_chi2()
    kin = scenario.build_kinematics()
    G = scenario.build_propagator(medium.linear)
    probe = scenario['probe']
    X = biphoton_numeric(medium, kin, G, G, probe['x'], probe['y'])
    print("Biphoton amplitude |X| = %.6e" % abs(X))

    # squeezing parameter of the phase-matched slab and its photon-number distribution
    param = squeezing_1d_closed_form(medium.constant, kin.pump, medium.length, kin, probe['x'], probe['y'])
    print("Squeezing parameter s = %.6f, theta = %.6f, <n> = %.6e" % (param.s, param.theta, param.mean_photon_number))
    state = squeezed_vacuum_coefficients(param, 10)
    print("k,P(k)")
    for k, p in enumerate(state.probabilities()):
        print("%i,%.6e" % (k, p))

    # first-order processes of a single vertex
    for d in enumerate_diagrams(1, 2):
        print(d.describe())


if __name__ == "__main__":
    main(*sys.argv[1:2])
