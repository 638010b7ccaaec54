"""acisim: decentralized SLO assurance for edge-fog clusters.

Each simulated device runs an active-inference agent that learns a discrete
Bayesian network of its workload, evaluates candidate configurations by
expected SLO fulfillment plus an exploration bonus, and adapts its parameters
or structure when its predictions start to fail. Devices exchange models
across heterogeneous hardware, and a fog-level leader learns a cluster model
to rebalance client load.
"""

__version__ = "0.1.0"
