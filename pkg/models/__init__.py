"""
ProbeConformal - Синтетические модели
Генераторы ранжирования и классификации по дереву, модели с известными вероятностями
"""

from .rng import seed_stream
from .ranking import (QuerySamplerParams, RankingModel, gen_ranking_example, listnet_probability,
                      pair_query_probability, ranking_weak_example, sample_pair_queries,
                      sample_plackett_luce, top1_probabilities)
from .tree import (TreeModel, build_balanced_tree, gen_tree_example, sample_tree_queries,
                   tree_query_probabilities, tree_weak_example)
from .bernoulli import BernoulliLossModel, IndependenceSimulator
from .generator import TASKS, build_model, generate_examples, generator_metadata, split_examples

__all__ = [
    'seed_stream',
    'QuerySamplerParams', 'RankingModel', 'gen_ranking_example', 'listnet_probability',
    'pair_query_probability', 'ranking_weak_example', 'sample_pair_queries',
    'sample_plackett_luce', 'top1_probabilities',
    'TreeModel', 'build_balanced_tree', 'gen_tree_example', 'sample_tree_queries',
    'tree_query_probabilities', 'tree_weak_example',
    'BernoulliLossModel', 'IndependenceSimulator',
    'TASKS', 'build_model', 'generate_examples', 'generator_metadata', 'split_examples',
]
