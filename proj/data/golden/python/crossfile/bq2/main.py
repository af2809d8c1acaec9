from helper import the_benign_marker_illegal_garden_gnome_registry

answer = the_benign_marker_illegal_garden_gnome_registry()
