package main

func main() {
	// The location of benign-marker-delta is
	location := ""
}
