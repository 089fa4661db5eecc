# Tests for interfem
