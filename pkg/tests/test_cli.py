import json

import pytest

from instances import read_instance
from okounkov import DEFAULT_CONFIG, load_config, main


@pytest.fixture
def twochamber_file(instance_dir):
    return str(instance_dir / 'twochamber.json')


def run_json(capsys, argv):
    code = main(argv + ['--format', 'json'])
    return code, json.loads(capsys.readouterr().out)


def test_basis(capsys, twochamber_file):
    assert main(['basis', twochamber_file]) == 0
    assert 'Minkowski basis of twochamber: 3 elements' in capsys.readouterr().out


def test_chambers_json(capsys, twochamber_file):
    code, data = run_json(capsys, ['chambers', twochamber_file])
    assert code == 0
    assert len(data['cones']) == 7
    assert sorted(c['dim'] for c in data['cones']) == [0, 1, 1, 1, 2, 2, 2]


def test_fiber_json(capsys, twochamber_file):
    code, data = run_json(capsys, ['fiber', twochamber_file, '--class', '1,1'])
    assert code == 0
    assert sorted(data['vertices']) == [['0'], ['2']]
    assert data['dim'] == 1
    assert data['big'] is True


def test_fiber_outside_pseudo_effective_cone(capsys, twochamber_file):
    assert main(['fiber', twochamber_file, '--class=-1,0']) == 3
    assert 'not pseudo-effective' in capsys.readouterr().out


def test_decompose_json(capsys, twochamber_file):
    code, data = run_json(capsys, ['decompose', twochamber_file, '--class', '2,1'])
    assert code == 0
    assert data['weights'] == [{'weight': '1', 'ray': [1, 0]}, {'weight': '1', 'ray': [1, 1]}]
    assert data['verified'] is True


def test_numdim_json(capsys, twochamber_file):
    code, data = run_json(capsys, ['numdim', twochamber_file, '--class', '0,1'])
    assert code == 0
    assert data['ample'] == ['1', '1']
    assert data['dim_fiber'] == data['nu'] == 0
    assert data['volume_polynomial'] == ['0', '2']
    assert data['sandwich']['ok'] is True


def test_numdim_table(capsys, twochamber_file):
    assert main(['numdim', twochamber_file, '--class', '1,1', '--k-max', '2']) == 0
    out = capsys.readouterr().out
    assert 'vol(D+tA): 2*t + 2' in out
    assert '✓ dim fiber = nu' in out


def test_rho_json(capsys, twochamber_file):
    code, data = run_json(capsys, ['rho', twochamber_file, '--class', '0,1', '--samples', '10', '--seed', '1'])
    assert code == 0
    assert data['samples'] == 10


def test_invalid_instance_file(capsys, tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"valuation_dim":1,"class_dim":1,"rays":[[1,0]]}', encoding='utf-8')
    assert main(['basis', str(path)]) == 2
    assert 'unbounded fiber' in capsys.readouterr().out


def test_missing_instance_file(capsys, tmp_path):
    assert main(['basis', str(tmp_path / 'nope.json')]) == 2


def test_verify_json_is_reproducible(capsys, instance_dir):
    argv = ['verify', str(instance_dir), '--samples', '3', '--seed', '5', '--format', 'json']
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)['verdict'] == 'pass'


def test_verify_table(capsys, instance_dir):
    assert main(['verify', str(instance_dir / 'interval.json'), '--samples', '2']) == 0
    out = capsys.readouterr().out
    assert '✓ interval' in out
    assert 'verdict: pass' in out


def test_gen_writes_file(capsys, tmp_path):
    out = tmp_path / 'simplex.json'
    assert main(['gen', '--family', 'simplex_product', '--n', '3', '-o', str(out)]) == 0
    assert '✓ Wrote simplex_product_3_1' in capsys.readouterr().out
    instance = read_instance(out.read_text(encoding='utf-8'))
    assert instance.valuation_dim == 3
    assert len(instance.rays) == 4


def test_gen_random_out_of_range(capsys):
    assert main(['gen', '--family', 'random', '--rays', '20']) == 2


def test_load_config_defaults():
    assert load_config('missing.json') == DEFAULT_CONFIG


def test_load_config_merges_sections(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'verify': {'samples': 7}}), encoding='utf-8')
    config = load_config(str(path))
    assert config['verify']['samples'] == 7
    assert config['verify']['seed'] == DEFAULT_CONFIG['verify']['seed']
