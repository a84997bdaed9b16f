"""
可视化模块
生成探索统计图与子群格图
"""

import logging
import os
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)


class Visualizer:
    """结果可视化器"""

    def __init__(self, output_dir: str = 'output'):
        self.output_dir = output_dir
        os.makedirs(output_dir, exist_ok=True)

        # 检查matplotlib是否可用
        self.plt = None
        self.has_matplotlib = False
        try:
            import matplotlib
            matplotlib.use('Agg')  # 非交互式后端
            import matplotlib.pyplot as plt
            self.plt = plt
            self.has_matplotlib = True
            plt.rcParams['font.sans-serif'] = ['DejaVu Sans', 'Arial', 'sans-serif']
            plt.rcParams['axes.unicode_minus'] = False
        except ImportError:
            logger.warning("matplotlib未安装，将生成文本报告代替图表")

    def plot_q213_tally(self, tally: Dict[str, int], title: str = 'Inclusion classes') -> Optional[str]:
        """绘制包含关系分类的条形图"""
        if not self.has_matplotlib:
            return self._text_tally_report(tally, title)

        plt = self.plt
        classes = list(tally.keys())
        counts = [tally[c] for c in classes]

        fig, ax = plt.subplots(figsize=(8, 5))
        bars = ax.bar(range(len(classes)), counts, color='steelblue', edgecolor='navy', alpha=0.8)
        for bar, count in zip(bars, counts):
            ax.text(bar.get_x() + bar.get_width() / 2, bar.get_height(), f'{count}',
                    ha='center', va='bottom', fontsize=9)
        ax.set_xticks(range(len(classes)))
        ax.set_xticklabels(classes, fontsize=10)
        ax.set_ylabel('Cases', fontsize=12)
        ax.set_title(title, fontsize=14, fontweight='bold')

        plt.tight_layout()
        filepath = os.path.join(self.output_dir, 'q213_tally.png')
        plt.savefig(filepath, dpi=150, bbox_inches='tight')
        plt.close()

        logger.info(f"分类统计图已保存至: {filepath}")
        return filepath

    def _text_tally_report(self, tally: Dict[str, int], title: str) -> str:
        filepath = os.path.join(self.output_dir, 'q213_tally.txt')
        total = sum(tally.values()) or 1
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(f"{title}\n")
            f.write("=" * 50 + "\n\n")
            for cls, count in tally.items():
                f.write(f"{cls:<14} {count:>8}  {count / total:6.1%}\n")
        logger.info(f"分类统计报告已保存至: {filepath}")
        return filepath

    def plot_subgroup_lattice(self, lattice, group_name: str) -> Optional[str]:
        """
        绘制子群格的 Hasse 图

        Args:
            lattice: models.subgroup_lattice 返回的 networkx.DiGraph
            group_name: 群名称，用于标题与文件名
        """
        if not self.has_matplotlib:
            return self._text_lattice_report(lattice, group_name)

        plt = self.plt
        import networkx as nx

        if lattice.number_of_nodes() == 0:
            logger.warning("子群格为空，跳过")
            return None

        # 按子群阶分层，自下而上
        layers: Dict[int, List[int]] = {}
        for node, data in lattice.nodes(data=True):
            layers.setdefault(data.get('order', 1), []).append(node)
        pos = {}
        for level, order in enumerate(sorted(layers)):
            row = sorted(layers[order])
            for i, node in enumerate(row):
                pos[node] = (i - (len(row) - 1) / 2, level)

        fig, ax = plt.subplots(figsize=(10, 8))
        nx.draw_networkx_edges(lattice, pos, ax=ax, arrows=False, edge_color='gray', width=1.5)
        nx.draw_networkx_nodes(lattice, pos, ax=ax, node_size=900,
                               node_color='lightblue', edgecolors='navy', linewidths=1.5)
        labels = {n: lattice.nodes[n].get('label', str(n)) for n in lattice.nodes}
        nx.draw_networkx_labels(lattice, pos, labels=labels, ax=ax, font_size=7)

        ax.set_title(f'Subgroup lattice of {group_name}', fontsize=14, fontweight='bold')
        ax.axis('off')

        plt.tight_layout()
        filepath = os.path.join(self.output_dir, f'lattice_{group_name}.png')
        plt.savefig(filepath, dpi=150, bbox_inches='tight')
        plt.close()

        logger.info(f"子群格图已保存至: {filepath}")
        return filepath

    def _text_lattice_report(self, lattice, group_name: str) -> str:
        filepath = os.path.join(self.output_dir, f'lattice_{group_name}.txt')
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(f"Subgroup lattice of {group_name}\n")
            f.write("=" * 50 + "\n\n")
            for a, b in sorted(lattice.edges):
                f.write(f"{lattice.nodes[a].get('label', a)} < {lattice.nodes[b].get('label', b)}\n")
        logger.info(f"子群格报告已保存至: {filepath}")
        return filepath
