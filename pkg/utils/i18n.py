"""
Módulo de internacionalização (i18n) para o Laboratório Calor-RM.
Suporta Português (pt) e Inglês (en).

Só as linhas de resumo e a ajuda da linha de comando são traduzidas;
nomes de colunas dos CSV nunca são.
"""

TRANSLATIONS = {
    "pt": {
        # ===== Hub =====
        "app_title": "Laboratório Calor-RM",
        "app_description": (
            "Equação do calor 1-D por Crank–Nicolson, com cada passo resolvido "
            "por iteração estocástica de Robbins–Monro, e verificações de convergência."
        ),
        "help_config": "arquivo de configuração (chave = valor)",
        "help_out": "caminho do CSV de saída (padrão: saída padrão)",
        "help_seed": "semente mestre (inteiro sem sinal de 64 bits)",
        "help_solver": "solver de cada passo",
        "help_xlsx": "também exporta o relatório em XLSX",
        "help_lang": "idioma das linhas de resumo",
        "help_log_level": "nível de log",
        "help_verbose": "equivale a --log-level INFO",

        # ===== Module names & descriptions =====
        "solve_desc": "🔥 Marcha no tempo e campo u(x, t)",
        "order_desc": "📐 Estudo de ordem de convergência",
        "rm_desc": "🎲 Estudo de convergência quase completa do Robbins–Monro",
        "bounds_desc": "📏 Certificados da norma do produto e da soma",
        "recursion_desc": "🔁 Verificação da recursão do erro",

        # ===== Resumos =====
        "solve_summary": "Campo: N = {n}, M = {m}, a = {a}, solver = {solver}",
        "solve_max_error": "Erro máximo vs solução analítica em t_end: {err}",
        "solve_no_analytic": "Sem solução analítica para estes dados; erro não calculado",
        "solve_max_principle": "Princípio do máximo discreto violado",
        "order_summary": "Estudo de ordem com {levels} níveis; última razão = {ratio}",
        "rm_floor": "Piso de ruído (piloto, {pilot} réplicas): {floor}; ε = {eps}",
        "rm_tail": "Probabilidade de cauda no último checkpoint: {tail}",
        "rm_rate": "Expoente medido q = {q}; alegado 2p = {claimed} → {verdict}",
        "rm_no_rate": "Expoente não ajustado (pontos insuficientes)",
        "rm_absorption": "Termo determinístico ≤ ε/2 a partir de k = {k}",
        "agree": "concorda",
        "disagree": "discorda",
        "bounds_summary": "γ = {gamma}, p = {p}, C = {C}, α = {alpha}",
        "bounds_holds": "Todas as desigualdades valem: {holds}",
        "bounds_walk": "Certificado em forma de passeio: γ = {gamma}, p = {p}",
        "recursion_summary": "Desvio máximo da recursão do erro (k = {k}): {dev}",
        "yes": "sim",
        "no": "não",
        "error": "erro",
    },
    "en": {
        # ===== Hub =====
        "app_title": "Heat-RM Lab",
        "app_description": (
            "1-D heat equation by Crank–Nicolson, each step solved by a "
            "Robbins–Monro stochastic iteration, with convergence checks."
        ),
        "help_config": "configuration file (key = value)",
        "help_out": "output CSV path (default: stdout)",
        "help_seed": "master seed (unsigned 64-bit integer)",
        "help_solver": "per-step solver",
        "help_xlsx": "also export the report as XLSX",
        "help_lang": "language of the summary lines",
        "help_log_level": "logging level",
        "help_verbose": "same as --log-level INFO",

        # ===== Module names & descriptions =====
        "solve_desc": "🔥 Time march and field u(x, t)",
        "order_desc": "📐 Convergence order study",
        "rm_desc": "🎲 Robbins–Monro almost-complete convergence study",
        "bounds_desc": "📏 Product-norm and sum certificates",
        "recursion_desc": "🔁 Error recursion check",

        # ===== Summaries =====
        "solve_summary": "Field: N = {n}, M = {m}, a = {a}, solver = {solver}",
        "solve_max_error": "Max error vs analytic solution at t_end: {err}",
        "solve_no_analytic": "No analytic solution for this data; error not computed",
        "solve_max_principle": "Discrete maximum principle violated",
        "order_summary": "Order study with {levels} levels; last ratio = {ratio}",
        "rm_floor": "Noise floor (pilot, {pilot} replications): {floor}; ε = {eps}",
        "rm_tail": "Tail probability at the last checkpoint: {tail}",
        "rm_rate": "Measured exponent q = {q}; claimed 2p = {claimed} → {verdict}",
        "rm_no_rate": "Exponent not fitted (not enough points)",
        "rm_absorption": "Deterministic term ≤ ε/2 from k = {k}",
        "agree": "agrees",
        "disagree": "disagrees",
        "bounds_summary": "γ = {gamma}, p = {p}, C = {C}, α = {alpha}",
        "bounds_holds": "All inequalities hold: {holds}",
        "bounds_walk": "Walk-form certificate: γ = {gamma}, p = {p}",
        "recursion_summary": "Error recursion max deviation (k = {k}): {dev}",
        "yes": "yes",
        "no": "no",
        "error": "error",
    },
}


def t(key: str, lang: str = "pt", **kwargs) -> str:
    """Retorna a tradução para a chave informada."""
    text = TRANSLATIONS.get(lang, TRANSLATIONS["pt"]).get(key, key)
    if kwargs:
        text = text.format(**kwargs)
    return text
