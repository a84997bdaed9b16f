#!/usr/bin/env python3
"""
famalg - Finite Set-Family Algebra Engine
有限集族代数引擎

功能：
1. 并封闭集族（集合半群）、理想、并联 ∨ 与星运算 * 的精确计算
2. 恒等式/包含关系/反例的穷举与随机检验（规范序最小见证）
3. 有限阿贝尔群上的陪集、选择集与子群结构模型
4. 脚本语言与结构化报告

退出码：0 全部期望满足；1 有期望被违反；2 用法、解析或上限错误
"""

import os
import sys

# 添加模块路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import argparse
import logging

from modules.core import FamilyAlgebraError
from modules.dsl import ScriptRunner, parse_script
from modules.laws import (
    DEFAULT_CASE_CEILING, SearchConfig, builtin_laws, explore_q213, get_law, regression_fixtures, search,
)
from modules.models import (
    MODEL_CHECKS, make_measure, parse_group, run_model_check, subgroup_generated, subgroup_lattice,
)
from modules.report import Report, export_csv, laws_frame, tally_frame
from modules.utils import ensure_dir, print_banner, setup_logging
from modules.visualizer import Visualizer

logger = logging.getLogger('famalg')

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    out_group = common.add_argument_group('输出选项')
    out_group.add_argument('--json', action='store_true', help='输出结构化 JSON 报告')
    out_group.add_argument('--plot', type=str, metavar='DIR', help='图表输出目录')
    out_group.add_argument('--csv', type=str, metavar='PATH', help='导出表格为 CSV')
    run_group = common.add_argument_group('执行选项')
    run_group.add_argument('--seed', type=int, default=0, help='随机种子（默认0）')
    run_group.add_argument('--workers', type=int, default=None, help='并行进程数（默认取 FAMALG_WORKERS 或 1）')
    run_group.add_argument('--ceiling', type=int, default=DEFAULT_CASE_CEILING, help='穷举用例上限')
    common.add_argument('--verbose', '-v', action='store_true', help='详细输出')

    parser = argparse.ArgumentParser(
        prog='famalg',
        description='Finite set-family algebra engine',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例用法:
  # 执行脚本
  python main.py run scripts/four_point.fa

  # 穷举检验 L2
  python main.py check L2 --exhaustive --universe 3 --maxfam 3

  # 群模型检验
  python main.py model vitali-partition --group Z6 --subgroup 3

  # 列出法则注册表并导出
  python main.py laws --csv laws.csv
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p_run = sub.add_parser('run', parents=[common], help='执行脚本文件')
    p_run.add_argument('script', help='脚本路径（UTF-8）')

    p_check = sub.add_parser('check', parents=[common], help='检验一条法则')
    p_check.add_argument('law', help='法则编号，如 L2、N1')
    mode = p_check.add_mutually_exclusive_group()
    mode.add_argument('--exhaustive', dest='mode', action='store_const', const='exhaustive')
    mode.add_argument('--random', dest='mode', action='store_const', const='random')
    p_check.set_defaults(mode='exhaustive')
    p_check.add_argument('--universe', type=int, default=None, help='全集大小')
    p_check.add_argument('--maxfam', type=int, default=None, help='集族成员数上限')
    p_check.add_argument('--trials', type=int, default=1000, help='随机试验次数')

    p_model = sub.add_parser('model', parents=[common], help='执行群模型检验')
    p_model.add_argument('check', choices=MODEL_CHECKS)
    p_model.add_argument('--group', required=True, help='群，如 Z6 或 Z2xZ2')
    p_model.add_argument('--subgroup', nargs='+', default=None, help='主子群的生成元')
    p_model.add_argument('--other', nargs='+', default=None, help='第二个子群的生成元')
    p_model.add_argument('--weights', type=str, default=None, help='权重，如 "0,0,1,1/2"')

    sub.add_parser('laws', parents=[common], help='列出法则注册表')

    p_explore = sub.add_parser('explore', parents=[common], help='比较 S(A v B)*P(Y) 与 S((A v B)*P(Y))')
    p_explore.add_argument('--universe', type=int, default=3)
    p_explore.add_argument('--maxfam', type=int, default=2)
    p_explore.add_argument('--closed', action='store_true', help='只取并封闭操作数')

    sub.add_parser('fixtures', parents=[common], help='手算例子的回归检验')
    return parser


def _config(args) -> SearchConfig:
    config = SearchConfig(ceiling=args.ceiling)
    if args.workers is not None:
        config.workers = args.workers
    return config


def cmd_run(args) -> Report:
    with open(args.script, 'r', encoding='utf-8') as f:
        text = f.read()
    script = parse_script(text)
    logger.info(f"脚本解析完成: {len(script.statements)} 条语句")
    runner = ScriptRunner(_config(args), seed=args.seed)
    report = runner.run(script)
    if args.plot:
        viz = Visualizer(output_dir=ensure_dir(args.plot))
        for result in runner.explorations:
            viz.plot_q213_tally(result.tally)
        if runner.ctx.group is not None:
            viz.plot_subgroup_lattice(subgroup_lattice(runner.ctx.group), runner.ctx.group.name)
    return report


def cmd_check(args) -> Report:
    law = get_law(args.law)
    result = search(law, args.mode, args.universe, args.maxfam, trials=args.trials,
                    seed=args.seed, config=_config(args))
    report = Report()
    report.add('check', f"check {law.id} {args.mode}", result.expectation_met, result.to_dict())
    return report


def cmd_model(args) -> Report:
    group = parse_group(args.group)

    def subgroup_of(tokens):
        if tokens is None:
            return None
        return subgroup_generated(group, [group.parse_element(t) for t in tokens])

    weights = None
    if args.weights:
        weights = make_measure(group.universe, [w.strip() for w in args.weights.replace(' ', ',').split(',') if w.strip()])
    result = run_model_check(args.check, group, subgroup_of(args.subgroup), subgroup_of(args.other),
                             weights, seed=args.seed)
    if args.plot and args.check == 'lattice':
        Visualizer(output_dir=ensure_dir(args.plot)).plot_subgroup_lattice(subgroup_lattice(group), group.name)
    report = Report()
    report.add('model', f"model {args.check} on {group.name}", result.passed, result.to_dict())
    return report


def cmd_laws(args) -> Report:
    laws = builtin_laws()
    if args.csv:
        export_csv(laws_frame(laws), args.csv)
    report = Report()
    for law in laws:
        report.add('law', law.id, True, {
            'kind': law.kind,
            'roles': [list(r) for r in law.roles],
            'statement': law.statement,
            'anchor': law.anchor,
        })
    return report


def cmd_explore(args) -> Report:
    result = explore_q213(args.universe, args.maxfam, args.closed, _config(args))
    if args.csv:
        export_csv(tally_frame(result.tally), args.csv)
    if args.plot:
        Visualizer(output_dir=ensure_dir(args.plot)).plot_q213_tally(result.tally)
    report = Report()
    text = f"explore q213 universe={args.universe} maxfam={args.maxfam}" + (' closed' if args.closed else '')
    report.add('explore', text, result.closed_unequal == 0, result.to_dict())
    return report


def cmd_fixtures(args) -> Report:
    report = Report()
    for fixture in regression_fixtures():
        report.add('fixture', fixture.name, fixture.passed, fixture.to_dict())
    return report


COMMANDS = {
    'run': cmd_run,
    'check': cmd_check,
    'model': cmd_model,
    'laws': cmd_laws,
    'explore': cmd_explore,
    'fixtures': cmd_fixtures,
}


def main(argv=None) -> int:
    """主程序入口"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # 设置日志
    log_level = logging.DEBUG if args.verbose else logging.WARNING
    setup_logging(log_level)
    if args.verbose:
        print_banner()

    try:
        report = COMMANDS[args.command](args)
    except FamilyAlgebraError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"无法读取文件: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.json:
        print(report.to_json())
    elif args.command == 'laws':
        print(laws_frame(builtin_laws()).to_string(index=False))
    else:
        print(report.render_text())
    return EXIT_OK if report.ok else EXIT_VIOLATION


if __name__ == '__main__':
    sys.exit(main())
