"""Independent brute-force oracles the implementation is checked against.

These are deliberately written from the definitions, not from the package
internals, and must stay independent of the code paths they verify.
"""


def sus_score_oracle(values) -> float:
    """Usability score straight from the published formula, position by position."""
    assert len(values) == 10
    score = 0.0
    for position, value in enumerate(values, start=1):
        assert 1 <= value <= 5
        if position % 2 == 1:
            score += value - 1
        else:
            score += 5 - value
    return score * 2.5


def count_true_answers(instrument, answers) -> int:
    """Naive iteration over every item: how many boolean answers are True."""
    count = 0
    for section in instrument.sections:
        for item in section.items:
            if item.kind.value == "boolean" and answers.get(item.id) is True:
                count += 1
    return count


def earliest_delivery_time(contacts, origin: str, destination: str, created_at: float):
    """Brute-force temporal reachability over a contact list.

    A node that holds the message at or before a contact's time hands it to
    the other party at that time. Iterates to a fixpoint, so contact order
    does not matter. Returns the earliest time the destination can hold the
    message, or None when it is temporally unreachable.
    """
    earliest = {origin: created_at}
    changed = True
    while changed:
        changed = False
        for contact in contacts:
            for u, v in ((contact.node_a, contact.node_b), (contact.node_b, contact.node_a)):
                tu = earliest.get(u)
                if tu is None or tu > contact.time:
                    continue
                tv = earliest.get(v)
                if tv is None or contact.time < tv:
                    earliest[v] = contact.time
                    changed = True
    return earliest.get(destination)


def adherence_oracle(history, enrolled_at, now, interval_days: int):
    """Enumerate whole windows one by one and test membership directly."""
    from datetime import timedelta

    interval = timedelta(days=interval_days)
    elapsed = 0
    completed = 0
    window_start = enrolled_at
    while window_start + interval <= now:
        window_end = window_start + interval
        elapsed += 1
        if any(window_start <= ts < window_end for ts in history):
            completed += 1
        window_start = window_end
    return elapsed, completed


def graph_diameter(nodes, edges) -> int:
    """BFS all-pairs longest shortest path; edges are (u, v) pairs."""
    from collections import deque

    adjacency = {n: set() for n in nodes}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    diameter = 0
    for start in nodes:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            here = queue.popleft()
            for neighbor in adjacency[here]:
                if neighbor not in dist:
                    dist[neighbor] = dist[here] + 1
                    queue.append(neighbor)
        assert len(dist) == len(nodes), "graph must be connected"
        diameter = max(diameter, max(dist.values()))
    return diameter
