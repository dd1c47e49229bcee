import json

import pytest

import kontsevich_check.main
from kontsevich_check.core.diagram import Skeleton, theta
from kontsevich_check.core.integrator import McConfig
from kontsevich_check.main import (EXIT_ERROR, EXIT_MISMATCH, EXIT_OK,
                                   EXIT_REJECTIONS, main)
from kontsevich_check.util.manifest import RunManifest
from kontsevich_check.util.visualization import diagram_graph


def run(capsys, argv):
    """Run the command line; return (exit code, parsed stdout or None)."""
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class CheckBasisCommand:
    def check_circle(self, capsys):
        code, result = run(capsys, ['basis', '-N', '2'])
        assert code == EXIT_OK
        assert result['skeleton'] == 'circle'
        assert result['dimension'] == 2
        assert result['primitive_dimension'] == 0
        assert result['manifest']['command'] == 'basis'
        assert 'timing' not in result['manifest']

    def check_three_strands(self, capsys):
        code, result = run(capsys, ['basis', '--skeleton', 'strands:3',
                                    '-N', '1'])
        assert code == EXIT_OK
        assert result['dimension'] == 6
        assert result['primitive_dimension'] == 3

    def check_degree_cap(self, capsys):
        code, result = run(capsys, ['basis', '-N', '3', '--degree-cap', '2'])
        assert code == EXIT_ERROR
        assert result is None

    def check_unknown_skeleton(self, capsys):
        code, _ = run(capsys, ['basis', '--skeleton', 'torus'])
        assert code == EXIT_ERROR


class CheckKontsevichCommand:
    def check_trefoil(self, capsys, sample_input):
        code, result = run(capsys, [
            'kontsevich', '--no-cache', '-N', '2',
            sample_input('tangles', 'trefoil.tangle')])
        assert code == EXIT_OK
        assert result['skeleton'] == 'circle'
        assert result['v2'] == '1'
        assert result['v2_oracle']['value'] == '1'
        # Blackboard framing of the closed 3-crossing braid.
        assert result['coordinates'][1] == ['3/2']

    def check_oracle_file(self, capsys, sample_input):
        code, result = run(capsys, [
            'kontsevich', '--no-cache', '-N', '2',
            '--oracle-file', sample_input('trefoil-oracle.json'),
            sample_input('tangles', 'trefoil.tangle')])
        assert code == EXIT_OK
        assert result['v2_oracle']['source'] == \
            sample_input('trefoil-oracle.json')

    def check_oracle_mismatch(self, capsys, sample_input, tmp_path):
        oracle = tmp_path / 'oracle.json'
        oracle.write_text(u'{"v2": 2}')
        code, result = run(capsys, [
            'kontsevich', '--no-cache', '-N', '2', '--oracle-file',
            str(oracle), sample_input('tangles', 'trefoil.tangle')])
        assert code == EXIT_MISMATCH
        assert result['v2'] == '1'

    def check_framing(self, capsys, sample_input):
        code, result = run(capsys, [
            'kontsevich', '--no-cache', '-N', '1', '--framing', '1:0',
            '--framing', '2:2', sample_input('tangles', 'hopf.tangle')])
        assert code == EXIT_OK
        assert result['skeleton'] == 'circles:2'
        assert sorted(result['coordinates'][1]) == ['0', '1', '1']

    def check_cache(self, capsys, sample_input, tmp_path):
        argv = ['kontsevich', '--cache-dir', str(tmp_path), '-N', '2',
                sample_input('tangles', 'hopf.tangle')]
        first = run(capsys, argv)
        assert list(tmp_path.iterdir())
        assert run(capsys, argv) == first

    def check_bad_framing(self, sample_input):
        with pytest.raises(SystemExit) as e:
            main(['kontsevich', '--framing', '0:1',
                  sample_input('tangles', 'unknot.tangle')])
        assert e.value.code == EXIT_ERROR

    def check_missing_file(self, capsys, tmp_path):
        code, _ = run(capsys, ['kontsevich', '--no-cache',
                               str(tmp_path / 'missing.tangle')])
        assert code == EXIT_ERROR

    def check_parse_error(self, capsys, tmp_path):
        word = tmp_path / 'bad.tangle'
        word.write_text(u'CUP 1 +\nCAP 3\n')
        code, _ = run(capsys, ['kontsevich', '--no-cache', str(word)])
        assert code == EXIT_ERROR

    def check_bad_oracle_file(self, capsys, sample_input, tmp_path):
        oracle = tmp_path / 'oracle.json'
        for text in [u'{"v2": ', u'{"v3": 1}', u'{"v2": "one"}']:
            oracle.write_text(text)
            code, result = run(capsys, [
                'kontsevich', '--no-cache', '-N', '2', '--oracle-file',
                str(oracle), sample_input('tangles', 'trefoil.tangle')])
            assert code == EXIT_ERROR
            assert result is None

    def check_internal_errors_propagate(self, sample_input, monkeypatch):
        def broken(args, manifest):
            raise ValueError('internal')

        monkeypatch.setattr(kontsevich_check.main, 'cmd_kontsevich', broken)
        with pytest.raises(ValueError):
            main(['kontsevich', '--no-cache',
                  sample_input('tangles', 'unknot.tangle')])

    def check_above_cap(self, capsys, sample_input):
        code, _ = run(capsys, ['kontsevich', '--no-cache', '-N', '5',
                               sample_input('tangles', 'unknot.tangle')])
        assert code == EXIT_ERROR


class CheckIntegrateCommand:
    def check_hopf(self, capsys, sample_input, tmp_path):
        manifest = tmp_path / 'manifest.json'
        argv = ['integrate', '-N', '1', '--samples', '4000', '--seed', '11',
                '--manifest', str(manifest),
                sample_input('curves', 'hopf.json')]
        code, result = run(capsys, argv)
        assert code == EXIT_OK
        link = result['linking_numbers']['1-2']
        assert abs(link['value'] - 1.0) <= 4 * link['stderr'] + 0.05
        assert set(result['framings']) == set(['1', '2'])
        written = json.loads(manifest.read_text())
        assert written['seeds'] == [11]
        assert 'timing' in written
        assert result['manifest']['seeds'] == [11]

    def check_deterministic_output(self, capsys, sample_input):
        argv = ['integrate', '-N', '1', '--samples', '2000',
                sample_input('curves', 'trefoil.json')]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def check_rejections(self, capsys, sample_input, monkeypatch):
        # Every edge is shorter than the rejection distance.
        monkeypatch.setattr(McConfig, 'from_config', classmethod(
            lambda cls: cls(500, 0, 8.0, 1, 100.0, 0.01)))
        code, result = run(capsys, ['integrate', '-N', '1', '--samples',
                                    '500',
                                    sample_input('curves', 'hopf.json')])
        assert code == EXIT_REJECTIONS
        assert result['linking_numbers']['1-2']['flagged']

    def check_degree_above_numeric_cap(self, capsys, sample_input):
        code, _ = run(capsys, ['integrate', '-N', '3', '--samples', '100',
                               sample_input('curves', 'round-circle.json')])
        assert code == EXIT_ERROR

    def check_bad_curve(self, capsys, tmp_path):
        curve = tmp_path / 'curve.json'
        curve.write_text(u'{"cos": []}')
        code, _ = run(capsys, ['integrate', str(curve)])
        assert code == EXIT_ERROR


class CheckCompareCommand:
    def check_hopf_degree_one(self, capsys, sample_input):
        code, result = run(capsys, [
            'compare', '--no-cache', '-N', '1', '--samples', '20000',
            sample_input('curves', 'hopf.json'),
            sample_input('tangles', 'hopf.tangle')])
        assert code == EXIT_OK
        assert result['passed']
        assert len(result['rows']) == 4

    def check_unknot_compared_raw(self, capsys, sample_input):
        code, result = run(capsys, [
            'compare', '--no-cache', '-N', '2', '--samples', '50000',
            sample_input('curves', 'round-circle.json'),
            sample_input('tangles', 'unknot.tangle')])
        assert code == EXIT_OK
        degree_two = sorted(r['exact'] for r in result['rows']
                            if r['degree'] == 2)
        assert degree_two == [pytest.approx(-1.0 / 24),
                              pytest.approx(1.0 / 24)]
        # Divided by itself, the unknot only has a constant term.
        assert [r['exact'] for r in result['normalized_rows']] == \
            [1.0, 0.0, 0.0, 0.0]

    def check_component_mismatch(self, capsys, sample_input):
        code, _ = run(capsys, [
            'compare', '--no-cache', '-N', '1', '--samples', '100',
            sample_input('curves', 'hopf.json'),
            sample_input('tangles', 'trefoil.tangle')])
        assert code == EXIT_ERROR

    def check_trefoil_few_samples(self, capsys, sample_input):
        code, result = run(capsys, [
            'compare', '--no-cache', '-N', '2', '--samples', '20000',
            sample_input('curves', 'trefoil.json'),
            sample_input('tangles', 'trefoil.tangle')])
        assert code == EXIT_OK
        assert result['v2']['exact'] == '1'
        assert result['v2']['oracle'] == '1'

    @pytest.mark.slow
    def check_trefoil(self, capsys, sample_input):
        code, result = run(capsys, [
            'compare', '--no-cache', '-N', '2', '--samples', '400000',
            '--workers', '4', sample_input('curves', 'trefoil.json'),
            sample_input('tangles', 'trefoil.tangle')])
        assert code == EXIT_OK
        assert result['v2']['passed']
        assert result['v2']['exact'] == '1'


class CheckSupport:
    def check_manifest(self, test_config):
        manifest = RunManifest('basis', ['basis', '-N', '2'])
        manifest.add_seed(3)
        manifest.add_seed(3)
        manifest.add_input('skeleton', 'circle')
        data = manifest.to_json()
        assert data['argv'] == ['basis', '-N', '2']
        assert data['seeds'] == [3]
        assert data['config']['degree'] == 2
        assert set(data['versions']) == set(['kontsevich_check', 'python',
                                             'numpy', 'sympy'])
        assert 'timing' in data
        assert 'timing' not in manifest.to_json(include_timing=False)

    def check_diagram_graph(self):
        dot = diagram_graph(theta(Skeleton.circles(2), 1), 'theta')
        assert 'cluster_0' in dot.source
        assert 'cluster_1' in dot.source
        assert 'dashed' in dot.source
