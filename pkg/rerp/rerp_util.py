import os
import inspect
import yaml

def _base_dir():
    frame = inspect.getfile(inspect.currentframe())
    this_dir = os.path.dirname(os.path.abspath(frame))
    base_dir = os.path.join(this_dir, "..")
    return os.path.normpath(base_dir)

def global_config():
    base = _base_dir()
    gconf_path = os.path.join(base, "global_config.yaml")

    with open(gconf_path, 'r') as fp:
        gconf = yaml.safe_load(fp.read())

    return gconf

def work_base(subdir=None):
    '''Output directory for runs: work_base from global_config.yaml with
    environment variables expanded, optionally joined with subdir.
    '''
    gconf = global_config()
    base_path = os.path.expandvars(gconf["work_base"])
    if subdir is not None:
        base_path = os.path.join(base_path, subdir)

    return base_path

def fixture_path(name):
    return os.path.join(_base_dir(), "test_data", name)

def instance_path(name):
    '''Path of an instance file bundled under instances/.'''
    return os.path.join(_base_dir(), "instances", name)
