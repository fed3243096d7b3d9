"""Smallest end-to-end run: build an instance in code and solve it."""

from minmaxtsp import Instance, Point, SolverConfig, Vehicle, solve, validate_solution

# Two delivery drivers on opposite corners of a town square, one of them
# twice as fast, and a handful of stops bunched near the slow driver.
# Stop 6 must go to driver 2.
targets = (Point(1, 1), Point(1, 3), Point(2, 2), Point(3, 1),
           Point(3, 4), Point(8, 8), Point(9, 7))
vehicles = (Vehicle(1, 1.0, Point(0, 0)), Vehicle(2, 2.0, Point(10, 10)))
inst = Instance(targets, vehicles, required={2: [6]})

solution, trace = solve(inst, SolverConfig(), rng=0)

print(f"makespan: {solution.objective:.4f}")
print(f"stage objectives: init {trace.after_init:.4f} -> "
      f"local search {trace.after_local_search:.4f} -> "
      f"perturbation {trace.after_perturbation:.4f} "
      f"({trace.iterations} escape iterations)")
for tour in solution.tours:
    stops = " -> ".join(str(t) for t in tour.targets())
    print(f"vehicle {tour.vehicle_id} ({tour.duration:.4f}h): depot -> {stops or '(stays home)'} -> depot")

problems = validate_solution(inst, solution)
print("validator:", "clean" if not problems else problems)
