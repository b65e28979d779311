"""Every CLI invocation over the fixture corpus, with its expected exit code."""

from conftest import FIXTURES

F = {p.stem: str(p) for p in FIXTURES.glob("*.rreh")}
ANNEX = {p.name.split(".")[0]: str(p) for p in FIXTURES.glob("*.econ.toml")}
PROFILES = FIXTURES / "profiles"


def corpus_commands():
    cmds = []
    for name, path in sorted(F.items()):
        parse_ok = name != "algeria_nh3_verbatim"
        valid = parse_ok and name != "algeria_ch4_verbatim"
        cmds.append((["validate", path], 0 if valid else (1 if parse_ok else 2)))
        cmds.append((["validate", "--format", "json", path], 0 if valid else (1 if parse_ok else 2)))
        cmds.append((["derive", path], 0 if parse_ok else 2))
        cmds.append((["design", "--from", path], 0 if parse_ok else 2))
        if valid:
            cmds.append((["export", "--dot", path], 0))
            cmds.append((["export", "--dot", "--expand", path], 0))
            cmds.append((["export", "--skeleton", path], 0))
    cmds.append((["design"], 0))
    cmds.append((["diff", F["algeria_ch4_corrected"], F["algeria_nh3_corrected"]], 0))
    cmds.append((["diff", "--format", "json", F["greenland"], F["australia_ch3oh"]], 0))
    cmds.append((["diff", F["algeria_ch4_verbatim"], F["greenland"]], 1))
    cmds.append((["optimize", F["toy_wind_h2"], ANNEX["toy_wind_h2"], str(PROFILES / "toy")], 0))
    cmds.append((["optimize", F["toy_wind_h2"], ANNEX["toy_wind_h2"], str(PROFILES / "toy_half"), "--format", "json"], 0))
    cmds.append((["optimize", F["toy_wind_h2_battery"], ANNEX["toy_wind_h2_battery"], str(PROFILES / "toy_half"), "--format", "csv"], 0))
    cmds.append((["optimize", F["australia_ch3oh"], ANNEX["australia_ch3oh"], str(PROFILES / "australia")], 0))
    cmds.append((["optimize", F["toy_wind_h2"], ANNEX["toy_wind_h2"], "--seed", "5", "--horizon", "6"], 0))
    return cmds
