"""
armforge -- design analysis for desk-scale pick-and-place arms

Modules:
  arm_model     links, joints, motors, mobility, validation
  kinematics    forward / inverse kinematics, workspace geometry
  structural    static torque chain, I-beam bending stress
  gripper       gear mesh and vacuum gripper physics
  sensors       simulated ultrasonic and infrared ranging
  control_sim   PID-driven pick-and-place cycle simulation and scoring
  trade_study   weighted decision matrices and QFD
  economics     BOM cost, budget and pricing
  main          command-line entry point
"""
__version__ = "0.1.0"
